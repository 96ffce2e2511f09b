#include <benchmark/benchmark.h>

#include <numbers>

#include "lipflow/commands.hpp"
#include "lipflow/oracle.hpp"

using namespace lipflow;

namespace {

struct Setup {
  Mesh m = make_mesh(99, 1.0);
  EigenPair e1 = eigen_first(2.0, m);
  EigenPair e2 = eigen_second_1d(2.0, m);
  Problem prob{m, 2.0, 0.5 * e1.lambda, PotentialSpec::smooth_power(4.0)};
  std::vector<double> thetas;
  Setup() {
    for (int k = 0; k < 8; ++k) thetas.push_back(2.0 * std::numbers::pi * (k + 0.5) / 8.0);
  }
};

const Setup& setup() {
  static Setup s;
  return s;
}

void BM_SweepRays(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) {
    auto r = sweep_rays(s.prob, s.e1, s.e2, s.thetas, FlowConfig{}, MultistartConfig{});
    benchmark::DoNotOptimize(r);
  }
}

void BM_SweepRaysSerial(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) {
    auto r = sweep_rays_serial(s.prob, s.e1, s.e2, s.thetas, FlowConfig{}, MultistartConfig{});
    benchmark::DoNotOptimize(r);
  }
}

void BM_SlopeSuite(benchmark::State& st) {
  auto samples = oracle::make_slope_samples(7, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::run_slope_suite(samples));
}

void BM_SlopeSuiteSerial(benchmark::State& st) {
  auto samples = oracle::make_slope_samples(7, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::run_slope_suite_serial(samples));
}

void BM_ConeInvariance(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) benchmark::DoNotOptimize(props::cone_invariance(s.prob, FlowConfig{}, 16, 3));
}

void BM_ConeInvarianceSerial(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) benchmark::DoNotOptimize(props::cone_invariance_serial(s.prob, FlowConfig{}, 16, 3));
}

}  // namespace

BENCHMARK(BM_SweepRays)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepRaysSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SlopeSuite)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SlopeSuiteSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConeInvariance)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConeInvarianceSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
