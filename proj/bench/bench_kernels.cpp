#include <benchmark/benchmark.h>

#include "glue/generate.hpp"
#include "glue/kernels.hpp"

namespace {

using namespace glue;

// Charts of a random gluing problem mapped into its disjoint union.
struct FinalInput {
  int n = 0;
  std::vector<ContinuousMap> maps;
};

FinalInput final_input(int points) {
  gen::Rng rng(7);
  FinSpace x = gen::random_space(rng, points, points);
  auto cover = gen::random_cover(rng, x, 4);
  FinalInput in{x.size(), {}};
  for (PointSet u : cover) in.maps.push_back(subspace(x, u).inclusion);
  return in;
}

void BM_FinalOpensSerial(benchmark::State& st) {
  FinalInput in = final_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::final_opens_serial(in.n, in.maps));
}

void BM_FinalOpensParallel(benchmark::State& st) {
  FinalInput in = final_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::final_opens_parallel(in.n, in.maps));
}

struct MediatingInput {
  FinSpace q, target;
  std::vector<kernels::LegConstraint> legs;
};

MediatingInput mediating_input(int points) {
  gen::Rng rng(11);
  FinSpace q = gen::random_space(rng, points, points);
  // A single open chart constrains part of q; the rest is free.
  PointSet u = q.minimal_open(0);
  ContinuousMap inc = subspace(q, u).inclusion;
  ContinuousMap h = gen::random_continuous_map(rng, q, 4);
  MediatingInput in{q, h.cod, {}};
  in.legs.emplace_back(inc, compose(h, inc));
  return in;
}

void BM_MediatingSerial(benchmark::State& st) {
  MediatingInput in = mediating_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_mediating_serial(in.q, in.target, in.legs, true));
}

void BM_MediatingParallel(benchmark::State& st) {
  MediatingInput in = mediating_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_mediating_parallel(in.q, in.target, in.legs, true));
}

}  // namespace

BENCHMARK(BM_FinalOpensSerial)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_FinalOpensParallel)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_MediatingSerial)->Arg(5)->Arg(7)->Arg(8);
BENCHMARK(BM_MediatingParallel)->Arg(5)->Arg(7)->Arg(8);

BENCHMARK_MAIN();
