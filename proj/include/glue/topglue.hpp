#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "glue/errors.hpp"
#include "glue/fintop.hpp"
#include "glue/index.hpp"

namespace glue {

using PairKey = std::pair<int, int>;
using TripleKey = std::array<int, 3>;

struct Overlap {
  FinSpace space;          // U_ij
  ContinuousMap upsilon;   // U_ij -> U_i
  bool operator==(const Overlap&) const = default;
};

struct TripleOverlap {
  FinSpace space;          // U_{i,jk}, j < k
  ContinuousMap to_j, to_k;  // into U_ij and U_ik
  bool operator==(const TripleOverlap&) const = default;
};

// Classical gluing data.  Diagonal entries (U_ii = U_i, phi_ii = id) are implicit.
struct TopGluingData {
  int n = 0;
  bool open_variant = true;
  std::vector<FinSpace> spaces;
  std::map<PairKey, Overlap> overlaps;                 // (i, j), i != j
  std::map<PairKey, ContinuousMap> transitions;        // phi_ij : U_ij -> U_ji
  std::map<TripleKey, TripleOverlap> triples;          // (i, j, k), j < k
  std::map<TripleKey, ContinuousMap> triple_transitions;  // phi^(k)_ij : U_{i,jk} -> U_{j,ik}

  // U_{i,{j,k}} -> U_{i,m} for m in {j, k}.
  const ContinuousMap& triple_leg(int i, int j, int k, int m) const;
  const TripleOverlap& triple(int i, int j, int k) const;
  bool operator==(const TopGluingData&) const = default;
};

// Pass/fail per named condition, with human-readable notes for failures.
struct ConditionReport {
  std::map<std::string, bool> conditions;
  std::vector<std::string> problems;

  void set(const std::string& name, bool ok, const std::string& why = "");
  bool all() const;
  bool get(const std::string& name) const;
};

class GluingDataError : public InvalidInput {
 public:
  explicit GluingDataError(ConditionReport report);
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

// Conditions: "structure", "inverse", "a" (diagonal conventions), "c" (cocycle),
// "d" (triple compatibility), "continuity", "openness", "pullback", "overlap_mono".
ConditionReport validate_data(const TopGluingData& d);

// Functor GL(I) -> (o)Top^op, arrows stored as their Top-side maps G(f)^op.
struct TopGluingFunctor {
  GluingIndexCategory cat;
  bool open_variant = true;
  std::map<GlueObject, FinSpace> objects;
  std::map<Generator, ContinuousMap> arrows;

  const FinSpace& at(const GlueObject& a) const;
  const ContinuousMap& arrow(const Generator& g) const;
  // Top-side image of the unique arrow a -> b, i.e. a map G_b -> G_a.
  ContinuousMap op_arrow(const GlueObject& a, const GlueObject& b) const;
  int n() const { return cat.n(); }
};

TargetOps<ContinuousMap> top_op_ops(const TopGluingFunctor& g);

TopGluingFunctor functor_from_data(const TopGluingData& d);
TopGluingData data_from_functor(const TopGluingFunctor& g);
// Conditions: "relations", "continuity", "openness", "pullback", "overlap_mono".
ConditionReport validate_functor(const TopGluingFunctor& g);

using Legs = std::map<GlueObject, ContinuousMap>;

struct GluedSpace {
  FinSpace q;
  FinSpace disjoint_union;
  std::vector<ContinuousMap> eps;  // G_i -> disjoint union
  ContinuousMap pi;                // disjoint union -> Q
  std::vector<std::pair<int, int>> relation;  // R_G including the diagonal
  Legs iota;                       // G_a -> Q for every object a
};

GluedSpace standard_representative(const TopGluingFunctor& g);

struct ConeCheck {
  bool full = false;       // every arrow of the diagram
  bool figure = false;     // tau, eta and triple conditions
  bool composite = false;  // same with tau replaced by the composite leg
  bool agree() const { return full == figure && figure == composite; }
};

// Legs psi_a : G_a -> N (Top side of a cone in Top^op).
ConeCheck is_cone(const FinSpace& apex, const Legs& psi, const TopGluingFunctor& g);

// Conditions "legs", "a".."e", "final_topology", "overlap_law", "triple_law".
struct GlueReport {
  ConditionReport report;
  bool verdict = false;     // legs and (a)-(e)
  bool glued_up = false;    // every condition
};

GlueReport verify_glued(const FinSpace& q, const Legs& iota, const TopGluingFunctor& g);

// mu : Q -> N with mu o iota_i = psi_i.
ContinuousMap mediating_morphism(const FinSpace& apex, const Legs& psi, const GluedSpace& glued,
                                 const TopGluingFunctor& g);

struct UniquenessCheck {
  bool exhaustive = false;
  std::uint64_t solutions = 0;  // exhaustive mode only
  bool unique = false;
};
// Enumerates every point function Q -> N when the search space has at most
// `exhaustive_limit` elements; otherwise perturbs mu at sampled points.
UniquenessCheck check_mediating_unique(const FinSpace& apex, const Legs& psi, const GluedSpace& glued,
                                       const ContinuousMap& mu, std::uint64_t seed,
                                       std::uint64_t exhaustive_limit = std::uint64_t{1} << 20);

struct CoverFunctor {
  TopGluingFunctor functor;
  Legs legs;  // inclusions G_a -> U
};
CoverFunctor cover_functor(const FinSpace& u, const std::vector<PointSet>& cover);

}  // namespace glue
