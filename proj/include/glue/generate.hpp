#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glue/ringed.hpp"
#include "glue/sheafglue.hpp"
#include "glue/topglue.hpp"

// Random instances for tests and benchmarks.  Valid gluing data is made by
// cutting a random space along a random open cover and relabelling every piece,
// so validity holds by construction.
namespace glue::gen {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);  // inclusive
std::vector<int> permutation(Rng& rng, int n);

FinSpace random_space(Rng& rng, int min_points, int max_points);
// Nonempty opens whose union is the whole space.
std::vector<PointSet> random_cover(Rng& rng, const FinSpace& x, int max_members);
// Subspace on the listed points, point a of the result being pts[a].
FinSpace labeled_subspace(const FinSpace& x, const std::vector<int>& pts);

struct TopInstance {
  FinSpace space;
  std::vector<PointSet> cover;
  TopGluingData data;
};
TopInstance random_top_data(Rng& rng, int max_n, int max_points, bool open_variant = true);
// One field changed so that validation must fail; absent when nothing can be changed.
std::optional<TopGluingData> corrupt_top_data(Rng& rng, const TopGluingData& d, std::string* what = nullptr);

// Random continuous map into a random space, or the constant map when sampling fails.
ContinuousMap random_continuous_map(Rng& rng, const FinSpace& dom, int max_target_points);
struct TopCone {
  FinSpace apex;
  Legs legs;
};
// psi_a = h o iota_a for a random continuous h : Q -> N.
TopCone random_cone(Rng& rng, const TopGluingFunctor& g, const GluedSpace& q, int max_apex_points);
// One value of one leg changed.
Legs corrupt_legs(Rng& rng, const TopCone& c);

Matrix random_unimodular(Rng& rng, int n, Matrix* inverse);
FgAbGroup random_group(Rng& rng, int max_ambient);
// Presentation-changed copy F' with an isomorphism F' -> F.
NatIso twist_presheaf(Rng& rng, const Presheaf& f);

struct SheafInstance {
  Presheaf global;  // the sheaf that was cut up
  SheafGluingData data;
};
SheafInstance random_sheaf_data(Rng& rng, int max_n, int max_points, int max_ambient);
// Zeroes one nonzero component of one projection; absent when all are zero.
std::optional<std::vector<EnrichedMorphism>> corrupt_projections(Rng& rng, const std::vector<EnrichedMorphism>& p);

// Small rings used by the generator.
std::vector<std::pair<std::string, FinCommRing>> small_rings();
FinCommRing named_ring(const std::string& name);  // "Z/n", "F4", "Z2[x]/x^2", "Z2xZ2"
std::vector<RingMap> ring_automorphisms(const FinCommRing& r);

struct RingedInstance {
  FinSpace space;
  std::vector<PointSet> cover;
  FinCommRing ring;
  RingedGluingData data;
};
RingedInstance random_ringed_data(Rng& rng, int max_n, int max_points, bool local_only);

}  // namespace glue::gen
