#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glue/errors.hpp"
#include "glue/fgab.hpp"
#include "glue/fintop.hpp"

namespace glue {

class PresheafError : public InvalidInput {
 public:
  explicit PresheafError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Presheaf of f.g. abelian groups on the opens of `ambient` contained in the open `carrier`.
class Presheaf {
 public:
  Presheaf() = default;

  const FinSpace& ambient() const { return ambient_; }
  PointSet carrier() const { return carrier_; }
  const std::vector<PointSet>& opens() const { return opens_; }
  int index(PointSet u) const;  // throws when u is not an open inside the carrier
  bool has_open(PointSet u) const;
  const FgAbGroup& sections(PointSet u) const { return groups_[index(u)]; }
  const AbHom& restriction(PointSet u, PointSet v) const;

  bool operator==(const Presheaf& o) const;

 private:
  friend Presheaf make_presheaf(const FinSpace&, PointSet, const std::map<PointSet, FgAbGroup>&,
                                const std::map<std::pair<PointSet, PointSet>, AbHom>&, bool);
  friend Presheaf restrict_presheaf(const Presheaf&, PointSet);
  FinSpace ambient_;
  PointSet carrier_ = 0;
  std::vector<PointSet> opens_;
  std::vector<FgAbGroup> groups_;
  std::vector<AbHom> res_;  // res_[a * k + b] for opens_[b] inside opens_[a]
};

// Restrictions are keyed (U, V) with V inside U.  With complete = true, missing
// restrictions are composed along supplied ones and identities are filled in.
// Throws PresheafError listing every problem found.
Presheaf make_presheaf(const FinSpace& ambient, PointSet carrier, const std::map<PointSet, FgAbGroup>& sections,
                       const std::map<std::pair<PointSet, PointSet>, AbHom>& restrictions, bool complete = false);

// Sheaf of locally constant g-valued functions: F(V) = g^(components of V).
Presheaf constant_sheaf(const FinSpace& ambient, PointSet carrier, const FgAbGroup& g);

Presheaf restrict_presheaf(const Presheaf& f, PointSet u);

// Transport of f (carrier = whole domain of e) along an injective open map e.
Presheaf pushforward_embedding(const Presheaf& f, const ContinuousMap& e);

struct SheafOptions {
  bool minimal_cover = true;
  int max_cover_size = 3;  // irredundant covers up to this size; 0 disables the sweep
};

struct SheafCertificate {
  bool sheaf = true;
  bool empty_trivial = true;
  PointSet open = 0;
  std::vector<PointSet> cover;
  std::string axiom;  // "identity" or "gluing" on failure
  std::string str() const;
};

SheafCertificate is_sheaf(const Presheaf& f, const SheafOptions& opt = {});
// Sheaf axioms for one cover of one open: F(V) -> equalizer is an isomorphism.
SheafCertificate check_cover(const Presheaf& f, PointSet v, const std::vector<PointSet>& cover);
// Covers checked by is_sheaf for the open v.
std::vector<std::vector<PointSet>> checked_covers(const Presheaf& f, PointSet v, const SheafOptions& opt = {});

// (V inside U, alpha): (U, F) -> (V, G), alpha_W : F(W) -> G(W n V) for every open W of the source.
struct EnrichedMorphism {
  Presheaf src, dst;
  std::vector<AbHom> alpha;  // indexed like src.opens()

  const AbHom& at(PointSet w) const { return alpha[src.index(w)]; }
};

struct EnrichedCheck {
  bool ok = true;
  std::vector<std::pair<PointSet, PointSet>> failing;  // (W, W') with W' inside W
  std::vector<std::string> problems;
};

EnrichedCheck check_enriched_morphism(const EnrichedMorphism& m);
EnrichedMorphism compose_enriched(const EnrichedMorphism& m2, const EnrichedMorphism& m1);
EnrichedMorphism identity_enriched(const Presheaf& f);
EnrichedMorphism restriction_enriched(const Presheaf& f, PointSet v);
bool equal_enriched(const EnrichedMorphism& a, const EnrichedMorphism& b);
// Components-only constructor for natural transformations between presheaves on the same carrier.
EnrichedMorphism natural_transformation(const Presheaf& src, const Presheaf& dst, std::vector<AbHom> components);

struct NatIso {
  EnrichedMorphism forward, backward;
};
// Naturality of both directions and two-sided inverses at every open.
bool is_nat_iso(const NatIso& n, std::vector<std::string>* problems = nullptr);
// Inverse family of a natural transformation whose components are isomorphisms.
std::optional<NatIso> invert_natural(const EnrichedMorphism& m);

}  // namespace glue
