#include <benchmark/benchmark.h>

#include "diffsub/grassmann.hpp"
#include "diffsub/synthetic.hpp"

namespace {

using dsub::Index;

struct Pair {
  dsub::Subspace a;
  dsub::Subspace b;
  dsub::Subspace c;
};

Pair random_triple(Index n, Index d) {
  dsub::synth::Rng rng(static_cast<std::uint64_t>(n * 131 + d));
  return {dsub::synth::random_subspace(n, d, rng), dsub::synth::random_subspace(n, d, rng),
          dsub::synth::random_subspace(n, d, rng)};
}

void BM_CanonicalStructure(benchmark::State& state) {
  const Pair p = random_triple(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dsub::canonical_structure(p.a, p.b));
}
BENCHMARK(BM_CanonicalStructure)->Args({30, 8})->Args({100, 40})->Args({400, 40});

void BM_AnalyticDecompose(benchmark::State& state) {
  const Pair p = random_triple(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dsub::analytic_decompose(p.a, p.b));
}
BENCHMARK(BM_AnalyticDecompose)->Args({30, 8})->Args({100, 40});

void BM_MagnitudeDecomposition(benchmark::State& state) {
  const Pair p = random_triple(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dsub::magnitude_decomposition(p.a, p.b, p.c));
}
BENCHMARK(BM_MagnitudeDecomposition)->Args({30, 8})->Args({100, 40});

void BM_Project(benchmark::State& state) {
  const Pair p = random_triple(state.range(0), state.range(1));
  const dsub::Subspace w = dsub::sum_subspace(p.a, p.b);
  for (auto _ : state) benchmark::DoNotOptimize(dsub::subspace_project(p.c, w));
}
BENCHMARK(BM_Project)->Args({30, 8})->Args({100, 40});

}  // namespace
