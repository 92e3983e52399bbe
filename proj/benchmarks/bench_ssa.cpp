#include <benchmark/benchmark.h>

#include "diffsub/ssa.hpp"
#include "diffsub/synthetic.hpp"

namespace {

dsub::SignalSeries harmonic_signal(dsub::Index length) {
  dsub::synth::SignalSegment s;
  s.kind = dsub::synth::SignalSegment::Kind::Harmonic;
  s.length = length;
  return dsub::synth::gen_signal({s}, {}, 1e-4, 1).series;
}

void BM_SignalSubspace(benchmark::State& state) {
  const dsub::SignalSeries h = harmonic_signal(400);
  const dsub::SsaConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(dsub::signal_subspace(h, 400, c));
}
BENCHMARK(BM_SignalSubspace)->Unit(benchmark::kMicrosecond);

// Default configuration over a short series; time per analysed step is
// the total divided by the reported item count.
void BM_SlidingAnalysis(benchmark::State& state) {
  const dsub::SsaConfig c;
  const dsub::SignalSeries h = harmonic_signal(dsub::min_series_length(c) + state.range(0) - 1);
  for (auto _ : state) benchmark::DoNotOptimize(dsub::sliding_analysis(h, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SlidingAnalysis)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
