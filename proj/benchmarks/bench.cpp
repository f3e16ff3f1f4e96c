#include <benchmark/benchmark.h>

#include "mmcfrt/energy_budget.hpp"
#include "mmcfrt/engine.hpp"

using namespace mmcfrt;

namespace {

Scenario fault_scenario() {
  Scenario sc;
  sc.fault.kind = FaultKind::LLLG;
  sc.fault.onset_s = 0.5;
  sc.fault.duration_s = 0.5;
  sc.t_end_s = 2.0;
  return sc;
}

void BM_EngineStep(benchmark::State& state) {
  Engine eng(fault_scenario());
  for (auto _ : state) eng.step();
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_EngineStep);

void BM_FullRun(benchmark::State& state) {
  const Scenario sc = fault_scenario();
  for (auto _ : state) {
    const RunResult r = Engine::run(sc);
    benchmark::DoNotOptimize(r.peak_v_dc_pu);
  }
}
BENCHMARK(BM_FullRun)->Unit(benchmark::kMillisecond);

void BM_EddSizing(benchmark::State& state) {
  const Scenario sc = fault_scenario();
  for (auto _ : state) {
    const auto rep = size_edd(sc.params, sc.fault);
    benchmark::DoNotOptimize(rep.required_energy_j);
  }
}
BENCHMARK(BM_EddSizing);

void BM_CapacitorStep(benchmark::State& state) {
  SystemParams p;
  MmcState m;
  m.cap_voltage_avg_v = p.sm_rated_voltage_v;
  for (auto _ : state) {
    m = capacitor_dynamics_step(m, 1e6, 1e6, 50e-6, p);
    benchmark::DoNotOptimize(m.cap_voltage_avg_v);
  }
}
BENCHMARK(BM_CapacitorStep);

}  // namespace

BENCHMARK_MAIN();
