#include <benchmark/benchmark.h>

#include "cusign/scenario.hpp"

namespace {

cusign::ScenarioConfig short_config(cusign::AttackKind kind) {
  cusign::ScenarioConfig cfg;
  cfg.seed = 7;
  cfg.duration_s = 10.0;  // 1000 steps at ts = 0.01
  if (kind != cusign::AttackKind::none) {
    cfg.attack = cusign::AttackSpec::scalar(kind, 500, 0.23226, 0, 3, 1);
  }
  return cfg;
}

void BM_ScenarioNominal(benchmark::State& state) {
  const cusign::ScenarioConfig cfg = short_config(cusign::AttackKind::none);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cusign::run_scenario(cfg));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ScenarioNominal)->Unit(benchmark::kMillisecond);

void BM_ScenarioStealthy(benchmark::State& state) {
  const cusign::ScenarioConfig cfg = short_config(cusign::AttackKind::stealthy_persistent);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cusign::run_scenario(cfg));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ScenarioStealthy)->Unit(benchmark::kMillisecond);

void BM_SteadyStateSolve(benchmark::State& state) {
  cusign::UgvParams ugv;
  cusign::Mat q = cusign::Mat::Zero(3, 3);
  q.diagonal() << 1e-4, 1e-5, 1e-4;
  cusign::Mat r = cusign::Mat::Zero(3, 3);
  r.diagonal() << 1e-3, 1e-3, 1e-3;
  const cusign::SystemModel model = cusign::build_ugv_model(ugv, q, r);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cusign::solve_steady_state(model));
  }
}
BENCHMARK(BM_SteadyStateSolve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
