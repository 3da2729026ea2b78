#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace glue {

using PointSet = std::uint64_t;
constexpr int kMaxPoints = 64;

inline PointSet bit(int p) { return PointSet{1} << p; }
inline PointSet full_set(int n) { return n >= 64 ? ~PointSet{0} : (PointSet{1} << n) - 1; }
inline int count(PointSet s) { return std::popcount(s); }
inline bool subset_of(PointSet a, PointSet b) { return (a & ~b) == 0; }
std::vector<int> members(PointSet s);
PointSet set_of(const std::vector<int>& pts);
std::string set_str(PointSet s);  // "{0,2}"

// Canonical order of opens: by cardinality, then by bitmask.
bool open_less(PointSet a, PointSet b);

class FinSpace {
 public:
  FinSpace();  // the empty space
  // Validates the topology axioms; duplicates are dropped.
  static FinSpace make(int n, std::vector<PointSet> opens);
  // Coarsest topology containing the given sets.
  static FinSpace generated(int n, const std::vector<PointSet>& subbasis);
  static FinSpace discrete(int n);
  static FinSpace indiscrete(int n);
  static FinSpace point() { return discrete(1); }
  static FinSpace sierpinski();  // opens {}, {0}, {0,1}

  int size() const { return n_; }
  PointSet full() const { return full_set(n_); }
  const std::vector<PointSet>& opens() const { return opens_; }
  bool is_open(PointSet s) const;
  int open_index(PointSet s) const;  // -1 when not open
  PointSet minimal_open(int x) const;
  // Opens contained in u, in canonical order.
  std::vector<PointSet> opens_within(PointSet u) const;

  bool operator==(const FinSpace& o) const = default;
  std::string str() const;

 private:
  int n_ = 0;
  std::vector<PointSet> opens_;
};

struct ContinuousMap {
  FinSpace dom, cod;
  std::vector<int> assign;

  // Validates totality and continuity, plus openness when requested.
  static ContinuousMap make(const FinSpace& dom, const FinSpace& cod, std::vector<int> assign, bool require_open = false);
  static ContinuousMap unchecked(const FinSpace& dom, const FinSpace& cod, std::vector<int> assign);
  static ContinuousMap identity(const FinSpace& x);

  int operator()(int x) const { return assign[x]; }
  PointSet image(PointSet s) const;
  PointSet preimage(PointSet s) const;
  bool operator==(const ContinuousMap& o) const = default;
};

bool is_total(const ContinuousMap& f);
bool is_continuous(const ContinuousMap& f);
bool is_open_map(const ContinuousMap& f);
bool is_injective(const ContinuousMap& f);
bool is_surjective(const ContinuousMap& f);
bool is_homeomorphism(const ContinuousMap& f);
ContinuousMap compose(const ContinuousMap& g, const ContinuousMap& f);  // g after f
// Set-theoretic inverse of a bijection (continuity not checked).
ContinuousMap inverse_bijection(const ContinuousMap& f);

struct Coproduct {
  FinSpace space;
  std::vector<ContinuousMap> injections;
  std::vector<int> offsets;
};
Coproduct coproduct(const std::vector<FinSpace>& spaces);

struct Quotient {
  FinSpace space;
  ContinuousMap projection;
  std::vector<PointSet> classes;  // ordered by least member
};
// Closes the relation to an equivalence and gives the quotient the final topology.
Quotient quotient_final(const FinSpace& x, const std::vector<std::pair<int, int>>& relation);

struct FiberProduct {
  FinSpace space;
  ContinuousMap p1, p2;
  std::vector<std::pair<int, int>> points;  // lexicographic
};
FiberProduct fiber_product(const ContinuousMap& f, const ContinuousMap& g);

struct Subspace {
  FinSpace space;
  ContinuousMap inclusion;
  std::vector<int> points;  // ambient label of each subspace point, increasing
};
Subspace subspace(const FinSpace& x, PointSet s);

// Connected components of the subspace s, ordered by least member.
std::vector<PointSet> connected_components(const FinSpace& x, PointSet s);

// apex --p1--> a --f--> c and apex --p2--> b --g--> c
struct Square {
  ContinuousMap p1, p2, f, g;
};
enum class SquareVerdict { Pullback, NotPullback, NotCommuting };
SquareVerdict is_pullback_square(const Square& sq);
// Pushouts in Top^op are pullbacks in Top.
inline SquareVerdict is_pushout_in_opposite(const Square& sq) { return is_pullback_square(sq); }

// Hasse diagram of the specialization preorder: edge x -> y when every open
// containing x also contains y, i.e. x lies in the closure of {y}.
std::string specialization_dot(const FinSpace& x, const std::string& name = "space");

}  // namespace glue
