#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glue/fintop.hpp"

// Exhaustive search loops.  Each kernel has a serial reference and an OpenMP
// version; tests require identical results.
namespace glue::kernels {

// All W in the powerset of {0..n-1} with every preimage f^-1(W) open, for maps f into an n-point set.
std::vector<PointSet> final_opens_serial(int n, const std::vector<ContinuousMap>& maps);
std::vector<PointSet> final_opens_parallel(int n, const std::vector<ContinuousMap>& maps);

struct MapCount {
  std::uint64_t count = 0;
  std::vector<int> first;  // lexicographically least solution, empty if none
};

// Point functions h: q -> target with h o legs[i].first == legs[i].second for all i,
// continuous when require_continuous.  legs[i].first maps into q.
using LegConstraint = std::pair<ContinuousMap, ContinuousMap>;
MapCount count_mediating_serial(const FinSpace& q, const FinSpace& target, const std::vector<LegConstraint>& legs,
                                bool require_continuous);
MapCount count_mediating_parallel(const FinSpace& q, const FinSpace& target, const std::vector<LegConstraint>& legs,
                                  bool require_continuous);

// |target|^|q|, saturating at UINT64_MAX.
std::uint64_t function_space_size(int q, int target);

int thread_count();

template <class F>
void parallel_for(std::size_t n, F&& f) {
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace glue::kernels
