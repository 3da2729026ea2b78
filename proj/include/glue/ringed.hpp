#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glue/fgab.hpp"
#include "glue/fintop.hpp"
#include "glue/presheaf.hpp"
#include "glue/sheafglue.hpp"
#include "glue/topglue.hpp"

namespace glue {

using Table = std::vector<std::vector<int>>;
using RingMap = std::vector<int>;  // element i of the source goes to map[i]

// Finite commutative ring with unity given by operation tables.
class FinCommRing {
 public:
  static constexpr int kMaxInputOrder = 64;

  FinCommRing();  // the zero ring
  // Exhaustive axiom check; throws InvalidInput naming a witness.
  static FinCommRing make(Table add, Table mul, int one);
  // Trusted construction for rings built out of valid ones.
  static FinCommRing unchecked(Table add, Table mul, int zero, int one);
  static FinCommRing zmod(int n);

  int order() const { return static_cast<int>(add_.size()); }
  int zero() const { return zero_; }
  int one() const { return one_; }
  int add(int a, int b) const { return add_[a][b]; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int neg(int a) const { return neg_[a]; }
  const Table& add_table() const { return add_; }
  const Table& mul_table() const { return mul_; }
  bool is_unit(int a) const;
  std::vector<int> units() const;

  bool operator==(const FinCommRing& o) const = default;

 private:
  Table add_, mul_;
  std::vector<int> neg_;
  int zero_ = 0, one_ = 0;
};

bool is_local_ring(const FinCommRing& r);
// Elements are tuples, first factor varying fastest.
FinCommRing product_ring(const std::vector<FinCommRing>& rs);
bool is_ring_hom(const FinCommRing& r, const FinCommRing& s, const RingMap& f);
bool is_bijective(const RingMap& f, int target_order);
// Units are exactly the preimages of units.
bool is_local_hom(const FinCommRing& r, const FinCommRing& s, const RingMap& f);
RingMap compose_maps(const RingMap& g, const RingMap& f);  // g after f
RingMap identity_map(int order);
std::optional<RingMap> invert_map(const RingMap& f);

// Additive group of a ring as a f.g. abelian group with element coordinates.
struct AdditiveGroup {
  FgAbGroup group;
  std::vector<Vec> coords;        // element -> coordinates
  std::vector<int> generators;    // elements mapped to the standard basis
  std::map<Vec, int> by_normal;   // normal form -> element

  int element(const Vec& v) const;
};
AdditiveGroup additive_group(const FinCommRing& r);
AbHom additive_hom(const AdditiveGroup& a, const AdditiveGroup& b, const FinCommRing& r, const RingMap& f);

// Presheaf of rings on the opens of `ambient` inside `carrier`.
class RingPresheaf {
 public:
  RingPresheaf() = default;
  const FinSpace& ambient() const { return ambient_; }
  PointSet carrier() const { return carrier_; }
  const std::vector<PointSet>& opens() const { return opens_; }
  int index(PointSet u) const;
  const FinCommRing& ring(PointSet u) const { return rings_[index(u)]; }
  const RingMap& restriction(PointSet u, PointSet v) const;
  bool operator==(const RingPresheaf& o) const;

 private:
  friend RingPresheaf make_ring_presheaf(const FinSpace&, PointSet, const std::map<PointSet, FinCommRing>&,
                                         const std::map<std::pair<PointSet, PointSet>, RingMap>&);
  FinSpace ambient_;
  PointSet carrier_ = 0;
  std::vector<PointSet> opens_;
  std::vector<FinCommRing> rings_;
  std::vector<RingMap> res_;
};

// Identity restrictions may be omitted.  Throws PresheafError.
RingPresheaf make_ring_presheaf(const FinSpace& ambient, PointSet carrier, const std::map<PointSet, FinCommRing>& rings,
                                const std::map<std::pair<PointSet, PointSet>, RingMap>& restrictions);
// Locally constant R-valued functions: F(W) = R^(components of W).
RingPresheaf constant_ring_sheaf(const FinSpace& ambient, PointSet carrier, const FinCommRing& r);
// Value at point p of a section of the constant sheaf over w.
int locally_constant_value(const FinSpace& ambient, PointSet w, const FinCommRing& r, int element, int p);
int locally_constant_element(const FinSpace& ambient, PointSet w, const FinCommRing& r, const std::vector<int>& values_by_point);
RingPresheaf restrict_ring_presheaf(const RingPresheaf& f, PointSet u);
// Transport along an injective open map e (carrier of f = whole domain).
RingPresheaf pushforward_ring(const RingPresheaf& f, const ContinuousMap& e);

struct AdditivePresheaf {
  Presheaf presheaf;
  std::vector<AdditiveGroup> groups;  // indexed like opens
};
AdditivePresheaf additive_presheaf(const RingPresheaf& f);

struct RingedSpace {
  FinSpace top;
  RingPresheaf sheaf;  // carrier = whole space
};
// Conditions "presheaf", "sheaf".
ConditionReport validate_ringed_space(const RingedSpace& r);
bool is_locally_ringed(const RingedSpace& r);

struct Stalk {
  int point = 0;
  PointSet minimal_open = 0;
  FinCommRing ring;
  std::map<PointSet, RingMap> germ;  // every open containing the point
};
Stalk stalk_at(const RingedSpace& r, int x);

// Set-valued cocone under the neighbourhood system of x.
struct StalkCocone {
  int size = 0;
  std::map<PointSet, std::vector<int>> maps;
};
bool is_stalk_cocone(const RingedSpace& r, int x, const StalkCocone& c);
// The unique map out of the stalk, checked against every leg; absent if c is not a cocone.
std::optional<std::vector<int>> stalk_mediating(const RingedSpace& r, int x, const StalkCocone& c);

// Morphism Y -> X: continuous map plus comorphism X(V) -> Y(f^-1 V) per open V of X.
struct RingedMorphism {
  RingedSpace src, dst;
  ContinuousMap top;
  std::vector<RingMap> comorphism;  // indexed like dst.sheaf.opens()

  const RingMap& at(PointSet v) const { return comorphism[dst.sheaf.index(v)]; }
};
std::vector<std::string> check_ringed_morphism(const RingedMorphism& m);
RingedMorphism identity_ringed(const RingedSpace& r);
RingedMorphism compose_ringed(const RingedMorphism& g, const RingedMorphism& f);  // g after f
// Inclusion of the open subspace u (relabelled 0..|u|-1) into r.
RingedMorphism open_inclusion(const RingedSpace& r, PointSet u);
// Copy of r with point p renamed perm[p]; the returned morphism goes r -> copy.
RingedMorphism relabel_ringed(const RingedSpace& r, const std::vector<int>& perm);
// O_{X,f(y)} -> O_{Y,y}.
RingMap stalk_hom(const RingedMorphism& m, int y);

enum class RingedVariant { RTS, LRTS, Sch };
std::string variant_name(RingedVariant v);

struct RingedGluingData {
  RingedVariant variant = RingedVariant::RTS;
  std::vector<RingedSpace> charts;
  std::map<PairKey, PointSet> overlaps;                // U_ij, open in chart i
  std::map<PairKey, std::vector<int>> transitions;     // point map on U_ij (-1 elsewhere) into U_ji
  // Phi_ij over each open W of chart i inside U_ij: F_i(W) -> F_j(phi_ij(W)).
  std::map<PairKey, std::map<PointSet, RingMap>> ring_transitions;

  int n() const { return static_cast<int>(charts.size()); }
  bool operator==(const RingedGluingData& o) const;
};

// Conditions "structure", "top", "rings", "inverse", "cocycle", "sheaf", "local".
// The Sch variant throws Unsupported.
ConditionReport validate_ringed_data(const RingedGluingData& d);

TopGluingData induced_top_data(const RingedGluingData& d);
TopGluingFunctor induced_top_functor(const RingedGluingData& d);

struct InducedSheaf {
  std::vector<RingPresheaf> ring_sheaves;  // pushed onto Q
  std::vector<AdditivePresheaf> additive;
  // Phi'_ij per open of Q inside the image overlap, canonical order.
  std::map<PairKey, std::vector<RingMap>> ring_transitions;
  SheafGluingData data;
};
InducedSheaf induced_sheaf(const RingedGluingData& d, const GluedSpace& q);
SheafGluingFunctor induced_sheaf_functor(const RingedGluingData& d);

struct StalkLemmaReport {
  bool iso = true;
  bool square = true;
  bool local = true;
  std::vector<std::string> problems;
  bool ok() const { return iso && square && local; }
};

struct GluedRinged {
  TopGluingFunctor top_functor;
  GluedSpace top;
  InducedSheaf induced;
  LimitSheaf additive_limit;
  RingedSpace space;
  std::vector<RingedMorphism> projections;  // chart_i -> space
  // Per open of Q: element -> component per chart.
  std::vector<std::vector<std::vector<int>>> tuples;
  StalkLemmaReport stalk_lemma;
};

// Throws GluingDataError for invalid data and Falsification if any executed
// conclusion (limit sizes, sheaf axiom, stalk lemma, locality) fails.
GluedRinged glue_ringed(const RingedGluingData& d);
StalkLemmaReport check_stalk_lemma(const GluedRinged& g, bool check_local);

struct RingedGlueReport {
  ConditionReport report;  // "legs", "top", "cone", "homeomorphism", "iso", "natural", "local"
  bool verdict = false;
};
RingedGlueReport verify_ringed_glued(const RingedSpace& c, const std::vector<RingedMorphism>& p,
                                     const RingedGluingData& d, const GluedRinged& glued);

}  // namespace glue
