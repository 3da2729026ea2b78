#pragma once

#include <map>
#include <optional>
#include <vector>

#include "glue/index.hpp"
#include "glue/presheaf.hpp"
#include "glue/topglue.hpp"

namespace glue {

// Sheaves F_i on the members U_i of an open cover of `base`, with transitions
// Phi_ij : F_i|U_ij -> F_j|U_ij for i != j (Phi_ii = id is implicit).
struct SheafGluingData {
  FinSpace base;
  std::vector<PointSet> cover;
  std::vector<Presheaf> sheaves;
  std::map<PairKey, EnrichedMorphism> transitions;
  bool sheaf_variant = true;  // false: presheaf gluing, no sheaf axiom required

  int n() const { return static_cast<int>(cover.size()); }
  PointSet overlap(int i, int j) const { return cover[i] & cover[j]; }
  bool operator==(const SheafGluingData& o) const;
};

// Conditions "structure", "natural", "inverse", "cocycle", "sheaf".
ConditionReport validate_sheaf_data(const SheafGluingData& d);

struct SheafGluingFunctor {
  GluingIndexCategory cat;
  bool sheaf_variant = true;
  std::map<GlueObject, Presheaf> objects;
  std::map<Generator, EnrichedMorphism> arrows;

  const Presheaf& at(const GlueObject& a) const;
  const EnrichedMorphism& arrow(const Generator& g) const;
  int n() const { return cat.n(); }
};

TargetOps<EnrichedMorphism> enriched_ops(const SheafGluingFunctor& g);

SheafGluingFunctor sheaf_functor_from_data(const SheafGluingData& d);
SheafGluingData data_from_sheaf_functor(const SheafGluingFunctor& g);
// Conditions "structure", "natural", "relations", "sheaf".
ConditionReport validate_sheaf_functor(const SheafGluingFunctor& g);

struct LimitSheaf {
  Presheaf sheaf;                     // L on the base
  std::vector<EnrichedMorphism> pi;   // L -> F_i
  std::vector<ProductResult> product; // per open of L: prod_i F_i(V n U_i)
  std::vector<AbHom> inclusion;       // per open of L: L(V) -> product
};

LimitSheaf build_limit_sheaf(const SheafGluingData& d);

// rho_i(s) for s in F_i(V n U_i), as coordinates in L(V).  Absent when V is not
// inside U_i or the translated family is not compatible.
std::optional<Vec> extend_section(const SheafGluingData& d, const LimitSheaf& l, int i, PointSet v, const Vec& s);

// Componentwise comparison F -> L assembled from a family p_i : F -> F_i.
// Absent when the pairing misses L at some open.
std::optional<EnrichedMorphism> comparison_map(const Presheaf& f, const std::vector<EnrichedMorphism>& p,
                                               const SheafGluingData& d, const LimitSheaf& l);

struct SheafGlueReport {
  ConditionReport report;  // "legs", "cone", "natural", "iso", "commute"
  bool verdict = false;
  std::optional<EnrichedMorphism> comparison;
};

SheafGlueReport verify_sheaf_glued(const Presheaf& f, const std::vector<EnrichedMorphism>& p, const SheafGluingData& d,
                                   const LimitSheaf& l);

// F|U_i with identity transitions, and the restriction family F -> F|U_i.
SheafGluingData sheaf_data_from_cover(const Presheaf& f, const std::vector<PointSet>& cover);
std::vector<EnrichedMorphism> canonical_projections(const Presheaf& f, const std::vector<PointSet>& cover);

}  // namespace glue
