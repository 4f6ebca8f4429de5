#include <benchmark/benchmark.h>

#include <vector>

#include "cusign/chi2.hpp"
#include "cusign/cusign.hpp"
#include "cusign/cusum.hpp"
#include "cusign/rng.hpp"

namespace {

std::vector<double> chi_square_draws(std::size_t n) {
  cusign::Rng rng(42);
  std::vector<double> z(n);
  for (double& v : z) v = rng.chi_square(3);
  return z;
}

void BM_CusignStep(benchmark::State& state) {
  const std::vector<double> z = chi_square_draws(1 << 16);
  cusign::CusignConfig cfg;
  cfg.z_ref = cusign::median_reference(3);
  cusign::CusignState st;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto alarms = cusign::cusign_step(st, cfg, z[i]);
    benchmark::DoNotOptimize(alarms);
    i = (i + 1) & (z.size() - 1);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CusignStep);

void BM_CusumStep(benchmark::State& state) {
  const std::vector<double> z = chi_square_draws(1 << 16);
  cusign::CusumConfig cfg;
  cfg.bias = 3.3;
  cfg.tau_c = 2.3226;
  cusign::CusumState st(cfg.ell);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cusign::cusum_step(st, cfg, z[i]));
    i = (i + 1) & (z.size() - 1);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CusumStep);

void BM_ExpectedAlarmRate(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cusign::expected_alarm_rate(tau, 0.497, 0.503, cusign::AccumCase::plus));
  }
}
BENCHMARK(BM_ExpectedAlarmRate)->Arg(2)->Arg(4)->Arg(16);

void BM_RegLowerGamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cusign::reg_lower_gamma(1.5, x));
    x += 0.1;
    if (x > 20.0) x = 0.1;
  }
}
BENCHMARK(BM_RegLowerGamma);

}  // namespace

BENCHMARK_MAIN();
