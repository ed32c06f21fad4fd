// Serial reference loops against the OpenMP kernels. Both produce identical
// reports; only wall time differs. Set OMP_NUM_THREADS to vary the team size.

#include "precoder/montecarlo.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace precoder;

mc::Execution execution(const benchmark::State& state) {
  return state.range(0) ? mc::Execution::Parallel : mc::Execution::Serial;
}

void BM_CdfExperiment(benchmark::State& state) {
  mc::ExperimentConfig c;
  c.n_channel_trials = 16;
  c.n_error_samples = 500;
  for (auto _ : state) benchmark::DoNotOptimize(mc::sinr_cdf_experiment(c, execution(state)));
}
BENCHMARK(BM_CdfExperiment)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DeltaSweep(benchmark::State& state) {
  mc::ExperimentConfig c;
  c.n_channel_trials = 8;
  const std::vector<double> grid{0.005, 0.01, 0.02, 0.04};
  for (auto _ : state) benchmark::DoNotOptimize(mc::power_vs_delta_sweep(c, grid, execution(state)));
}
BENCHMARK(BM_DeltaSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WorstCaseCheck(benchmark::State& state) {
  auto rng = model::make_rng(1, mc::stream::kChannel, 0);
  const model::ChannelSet h = model::generate_channels(3, 3, rng);
  const model::QosSpec q = model::QosSpec::uniform_db(3, 5.0, 1.0);
  const auto designed = design::design_nominal(h, q);
  const std::vector<double> delta(3, 0.015);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::worst_case_check(h, *designed.precoder, q, delta, 20000, 1, execution(state)));
  }
}
BENCHMARK(BM_WorstCaseCheck)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
