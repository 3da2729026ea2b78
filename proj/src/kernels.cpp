#include "glue/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

#include "glue/errors.hpp"

namespace glue::kernels {

namespace {

constexpr int kMaxFinalPoints = 24;

void check_final_inputs(int n, const std::vector<ContinuousMap>& maps) {
  if (n > kMaxFinalPoints) throw InvalidInput("final topology enumeration limited to 24 points");
  for (const auto& f : maps)
    if (f.cod.size() != n) throw InvalidInput("final_opens: map codomain size mismatch");
}

bool preimages_open(PointSet w, const std::vector<ContinuousMap>& maps) {
  for (const auto& f : maps)
    if (!f.dom.is_open(f.preimage(w))) return false;
  return true;
}

// Decodes index into a base-m digit vector of length q, least significant first.
void decode(std::uint64_t idx, int q, int m, std::vector<int>& h) {
  for (int p = 0; p < q; ++p) {
    h[p] = static_cast<int>(idx % static_cast<std::uint64_t>(m));
    idx /= static_cast<std::uint64_t>(m);
  }
}

bool admissible(const std::vector<int>& h, const FinSpace& q, const FinSpace& target,
                const std::vector<LegConstraint>& legs, bool require_continuous) {
  for (const auto& [in, out] : legs)
    for (int x = 0; x < in.dom.size(); ++x)
      if (h[in.assign[x]] != out.assign[x]) return false;
  if (require_continuous) return is_continuous(ContinuousMap::unchecked(q, target, h));
  return true;
}

void check_mediating_inputs(const FinSpace& q, const FinSpace& target, const std::vector<LegConstraint>& legs) {
  for (const auto& [in, out] : legs)
    if (!(in.cod == q) || !(out.cod == target) || !(in.dom == out.dom))
      throw InvalidInput("mediating search: leg endpoints mismatch");
  if (function_space_size(q.size(), target.size()) > (std::uint64_t{1} << 32))
    throw InvalidInput("mediating search space too large for exhaustive enumeration");
}

// Index order is most-significant-digit-last, so map it to lexicographic order on h.
std::uint64_t lex_key(const std::vector<int>& h, int m) {
  std::uint64_t k = 0;
  for (int v : h) k = k * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(v);
  return k;
}

}  // namespace

std::uint64_t function_space_size(int q, int target) {
  std::uint64_t s = 1;
  for (int i = 0; i < q; ++i) {
    if (target != 0 && s > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(target))
      return std::numeric_limits<std::uint64_t>::max();
    s *= static_cast<std::uint64_t>(target);
  }
  return s;
}

int thread_count() { return omp_get_max_threads(); }

std::vector<PointSet> final_opens_serial(int n, const std::vector<ContinuousMap>& maps) {
  check_final_inputs(n, maps);
  std::vector<PointSet> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t w = 0; w < total; ++w)
    if (preimages_open(w, maps)) out.push_back(w);
  std::sort(out.begin(), out.end(), open_less);
  return out;
}

std::vector<PointSet> final_opens_parallel(int n, const std::vector<ContinuousMap>& maps) {
  check_final_inputs(n, maps);
  const std::int64_t total = std::int64_t{1} << n;
  std::vector<char> hit(static_cast<size_t>(total), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t w = 0; w < total; ++w) hit[static_cast<size_t>(w)] = preimages_open(static_cast<PointSet>(w), maps);
  std::vector<PointSet> out;
  for (std::int64_t w = 0; w < total; ++w)
    if (hit[static_cast<size_t>(w)]) out.push_back(static_cast<PointSet>(w));
  std::sort(out.begin(), out.end(), open_less);
  return out;
}

MapCount count_mediating_serial(const FinSpace& q, const FinSpace& target, const std::vector<LegConstraint>& legs,
                                bool require_continuous) {
  check_mediating_inputs(q, target, legs);
  MapCount out;
  const int m = target.size();
  const std::uint64_t total = function_space_size(q.size(), m);
  std::vector<int> h(q.size());
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    decode(idx, q.size(), m, h);
    if (!admissible(h, q, target, legs, require_continuous)) continue;
    ++out.count;
    std::uint64_t key = lex_key(h, m);
    if (key < best) {
      best = key;
      out.first = h;
    }
  }
  return out;
}

MapCount count_mediating_parallel(const FinSpace& q, const FinSpace& target, const std::vector<LegConstraint>& legs,
                                  bool require_continuous) {
  check_mediating_inputs(q, target, legs);
  const int m = target.size();
  const std::int64_t total = static_cast<std::int64_t>(function_space_size(q.size(), m));
  std::uint64_t count = 0;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel reduction(+ : count) reduction(min : best)
  {
    std::vector<int> h(q.size());
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
      decode(static_cast<std::uint64_t>(idx), q.size(), m, h);
      if (!admissible(h, q, target, legs, require_continuous)) continue;
      ++count;
      best = std::min(best, lex_key(h, m));
    }
  }
  MapCount out;
  out.count = count;
  if (count > 0) {
    out.first.assign(q.size(), 0);
    std::uint64_t k = best;
    for (int p = q.size() - 1; p >= 0; --p) {
      out.first[p] = static_cast<int>(k % static_cast<std::uint64_t>(m));
      k /= static_cast<std::uint64_t>(m);
    }
  }
  return out;
}

}  // namespace glue::kernels
