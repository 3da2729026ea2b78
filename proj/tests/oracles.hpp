#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "glue/fintop.hpp"

// Brute-force references shared by the test suites.
namespace oracle {

using glue::ContinuousMap;
using glue::FinSpace;
using glue::PointSet;

// Every W with each preimage open.
inline std::vector<PointSet> final_opens(int n, const std::vector<ContinuousMap>& maps) {
  std::vector<PointSet> out;
  for (PointSet w = 0; w < (PointSet{1} << n); ++w) {
    bool ok = true;
    for (const auto& f : maps) ok = ok && f.dom.is_open(f.preimage(w));
    if (ok) out.push_back(w);
  }
  std::sort(out.begin(), out.end(), glue::open_less);
  return out;
}

// Topology with the given minimal neighbourhoods.
inline std::vector<PointSet> opens_from_minimal(const std::vector<PointSet>& minimal) {
  const int n = static_cast<int>(minimal.size());
  std::vector<PointSet> out;
  for (PointSet w = 0; w < (PointSet{1} << n); ++w) {
    bool ok = true;
    for (int p = 0; p < n; ++p)
      if ((w >> p & 1) && (minimal[p] & ~w)) ok = false;
    if (ok) out.push_back(w);
  }
  std::sort(out.begin(), out.end(), glue::open_less);
  return out;
}

inline int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Equivalence classes of the generated equivalence relation, as class ids ordered by least member.
inline std::vector<int> classes(int n, const std::vector<std::pair<int, int>>& rel) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : rel) parent[find(parent, a)] = find(parent, b);
  std::vector<int> id(n, -1), root_id(n, -1);
  int next = 0;
  for (int x = 0; x < n; ++x) {
    int r = find(parent, x);
    if (root_id[r] < 0) root_id[r] = next++;
    id[x] = root_id[r];
  }
  return id;
}

// Set-level pullback of f: A -> C and g: B -> C with the subspace topology of the product.
struct Pullback {
  std::vector<std::pair<int, int>> points;
  std::vector<PointSet> opens;
};

inline Pullback pullback(const ContinuousMap& f, const ContinuousMap& g) {
  Pullback pb;
  for (int a = 0; a < f.dom.size(); ++a)
    for (int b = 0; b < g.dom.size(); ++b)
      if (f(a) == g(b)) pb.points.emplace_back(a, b);
  std::vector<PointSet> minimal;
  for (auto [a, b] : pb.points) {
    PointSet m = 0;
    for (size_t q = 0; q < pb.points.size(); ++q)
      if ((f.dom.minimal_open(a) >> pb.points[q].first & 1) && (g.dom.minimal_open(b) >> pb.points[q].second & 1))
        m |= PointSet{1} << q;
    minimal.push_back(m);
  }
  pb.opens = opens_from_minimal(minimal);
  return pb;
}

}  // namespace oracle
