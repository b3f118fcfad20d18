#include <benchmark/benchmark.h>

#include <cmath>

#include "cfm/mc_oracle.hpp"
#include "cfm/metrics.hpp"
#include "cfm/moment_engine.hpp"

namespace {

cfm::ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) ? cfm::ExecPolicy::Parallel : cfm::ExecPolicy::Serial;
}

void BM_Panels(benchmark::State& state) {
  std::vector<cfm::quad::Panel> panels;
  for (int i = 0; i < 512; ++i) panels.push_back({i * 1.0, i + 1.0});
  auto f = [](double x) { return std::cos(x * x) / (1.0 + x); };
  for (auto _ : state) {
    auto r = cfm::quad::integrate_panels(f, panels, 1e-14, 1e-12, 200, policy(state));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Panels)->Arg(0)->Arg(1);

void BM_EmpiricalMoment(benchmark::State& state) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({std::sin(1.7 * i) * 3.0});
  const auto phi = cfm::make_empirical(pts);
  cfm::QuadratureSpec spec;
  spec.policy = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(cfm::absolute_moment(phi, 0.7, spec));
}
BENCHMARK(BM_EmpiricalMoment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GridSup(benchmark::State& state) {
  const auto a = cfm::make_linnik(1.5, 2.0, 3), b = cfm::make_product(cfm::make_gaussian(1.0, 3), cfm::make_point_mass({0.3, 0.0, 0.1}));
  cfm::QuadratureSpec spec;
  spec.policy = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(cfm::d_beta(a, b, 0.5, spec));
}
BENCHMARK(BM_GridSup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sampling(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cfm::sample_linnik_1d(1.5, 2.0, 1 << 20, 11, policy(state)));
}
BENCHMARK(BM_Sampling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
