#include <benchmark/benchmark.h>

#include "dfp/observables.hpp"
#include "dfp/process.hpp"
#include "dfp/trajectory.hpp"

namespace {

// Whole runs to termination; reports steps per second.
void BM_RunToTermination(benchmark::State& st) {
  const auto n = static_cast<dfp::Vertex>(st.range(0));
  std::uint64_t seed = 1, steps = 0;
  for (auto _ : st) {
    dfp::ProcessState s(n, seed++);
    while (auto p = s.sample_open()) s.apply_edge(*p);
    steps += s.steps();
    benchmark::DoNotOptimize(s.counters());
  }
  st.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunToTermination)->Arg(200)->Arg(800)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SolveR(benchmark::State& st) {
  double t = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(dfp::solve_r(t));
    t = t > 20 ? 0 : t + 0.013;
  }
}
BENCHMARK(BM_SolveR);

void BM_PairObservables(benchmark::State& st) {
  const auto n = static_cast<dfp::Vertex>(st.range(0));
  dfp::ProcessState s(n, 7);
  const auto steps = static_cast<std::uint64_t>(0.5 * std::pow(double(n), 1.5));
  for (std::uint64_t k = 0; k < steps; ++k) s.apply_edge(*s.sample_open());
  dfp::Rng rng(3);
  for (auto _ : st) {
    const auto [u, v] = dfp::decode_pair(dfp::PairId{static_cast<std::uint32_t>(dfp::uniform_below(rng, dfp::pair_count(n)))});
    benchmark::DoNotOptimize(dfp::pair_observables(s, u, v));
  }
}
BENCHMARK(BM_PairObservables)->Arg(500)->Arg(2000);

void BM_MaxCodegreeExact(benchmark::State& st) {
  const auto n = static_cast<dfp::Vertex>(st.range(0));
  dfp::ProcessState s(n, 11);
  const auto steps = static_cast<std::uint64_t>(std::pow(double(n), 1.5));
  for (std::uint64_t k = 0; k < steps; ++k) s.apply_edge(*s.sample_open());
  for (auto _ : st) benchmark::DoNotOptimize(dfp::max_codegree_exact(s));
}
BENCHMARK(BM_MaxCodegreeExact)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
