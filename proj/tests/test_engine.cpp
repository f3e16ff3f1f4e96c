#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "mmcfrt/csv.hpp"
#include "mmcfrt/engine.hpp"
#include "mmcfrt/svg.hpp"

using namespace mmcfrt;

namespace {

Scenario no_fault_scenario(double t_end = 1.0) {
  Scenario sc;
  sc.t_end_s = t_end;
  return sc;
}

Scenario lllg_scenario() {
  Scenario sc;
  sc.fault.kind = FaultKind::LLLG;
  sc.fault.onset_s = 6.5;
  sc.fault.duration_s = 0.5;
  sc.fault.residual_factor = 0.0;
  sc.t_end_s = 9.0;
  return sc;
}

const RunResult& lllg_result() {
  static const RunResult r = Engine::run(lllg_scenario());
  return r;
}

}  // namespace

TEST_CASE("steady operation without a fault") {
  const RunResult r = Engine::run(no_fault_scenario());
  REQUIRE_FALSE(r.aborted);
  CHECK(r.edd_total_j == 0.0);
  CHECK(r.budget.t1_s == 0.0);  // budget window never opens

  for (const Sample& s : r.log.samples) {
    if (s.t_s < 0.2) continue;  // flat-start settling
    CHECK(s.v_dc_onshore_pu > 0.98);
    CHECK(s.v_dc_onshore_pu < 1.02);
    CHECK(s.rec_energy_pu == doctest::Approx(1.0).epsilon(0.03));
    CHECK(s.sec_energy_pu == doctest::Approx(1.0).epsilon(0.03));
  }
  const Sample& last = r.log.samples.back();
  CHECK(last.p_export_w == doctest::Approx(420e6).epsilon(0.05));
}

TEST_CASE("runs are bit-identical") {
  const RunResult a = Engine::run(no_fault_scenario(0.5));
  const RunResult b = Engine::run(no_fault_scenario(0.5));
  REQUIRE(a.log.samples.size() == b.log.samples.size());
  CHECK(a.peak_v_dc_pu == b.peak_v_dc_pu);
  CHECK(a.rec_peak_energy_pu == b.rec_peak_energy_pu);
  const Sample& sa = a.log.samples.back();
  const Sample& sb = b.log.samples.back();
  CHECK(sa.v_dc_onshore_v == sb.v_dc_onshore_v);
  CHECK(sa.rec_cap_v == sb.rec_cap_v);
  CHECK(sa.i_d_a == sb.i_d_a);
  CHECK(sa.losses_j == sb.losses_j);
}

TEST_CASE("stage events are ordered through the fault") {
  const RunResult& r = lllg_result();
  REQUIRE_FALSE(r.aborted);
  REQUIRE(r.log.events.size() >= 3);
  CHECK(r.log.events[0].stage == FrtStage::Normal);
  bool storing_seen = false, dissipating_seen = false;
  double last_t = -1;
  for (const StageEvent& e : r.log.events) {
    CHECK(e.t_s > last_t - 1e-12);
    last_t = e.t_s;
    if (e.stage == FrtStage::Storing && !dissipating_seen) storing_seen = true;
    if (e.stage == FrtStage::Dissipating) {
      CHECK(storing_seen);  // dissipation never precedes storing
      dissipating_seen = true;
    }
  }
  CHECK(storing_seen);
  CHECK(dissipating_seen);
}

TEST_CASE("budget closes within two percent of the surplus integral") {
  const RunResult& r = lllg_result();
  const EnergyBudget& b = r.budget;
  REQUIRE(b.t1_s > b.t0_s);
  CHECK(b.t0_s == doctest::Approx(6.5).epsilon(1e-3));
  CHECK(std::abs(b.closure_residual_j) <
        0.02 * std::abs(b.surplus_integral_j));
}

TEST_CASE("decimation controls the sample count") {
  Scenario sc = no_fault_scenario(0.1);
  sc.log_decimation = 40;
  const RunResult r = Engine::run(sc);
  const auto total = static_cast<size_t>(std::llround(sc.t_end_s / sc.dt_s));
  CHECK(r.log.samples.size() == total / 40 + 1);
}

TEST_CASE("halving the step barely moves the end state") {
  Scenario coarse = no_fault_scenario(0.5);
  Scenario fine = coarse;
  fine.dt_s = coarse.dt_s / 2.0;
  fine.log_decimation = coarse.log_decimation * 2;
  const RunResult a = Engine::run(coarse);
  const RunResult b = Engine::run(fine);
  const double va = a.log.samples.back().v_dc_onshore_pu;
  const double vb = b.log.samples.back().v_dc_onshore_pu;
  CHECK(std::abs(va - vb) / vb < 1e-3);
}

TEST_CASE("CSV round-trips and regenerates the same figure") {
  Scenario sc = no_fault_scenario(0.2);
  const RunResult r = Engine::run(sc);
  const std::string csv = timeseries_csv(r.log);
  CHECK(csv.rfind("t_s,", 0) == 0);

  const std::string path = "engine_test_roundtrip.csv";
  write_timeseries_csv(r.log, path);
  const TimeSeriesLog back = read_timeseries_csv(path);
  std::remove(path.c_str());
  REQUIRE(back.samples.size() == r.log.samples.size());
  CHECK(timeseries_csv(back) == csv);
  CHECK(panels_svg(back) == panels_svg(r.log));
}

TEST_CASE("unprotected double fault trips the DC ceiling") {
  Scenario sc = lllg_scenario();
  sc.energy_control_enabled = false;
  sc.edd_enabled = false;
  const RunResult r = Engine::run(sc);
  CHECK(r.aborted);
  CHECK(r.abort_reason.find("ceiling") != std::string::npos);
  CHECK_FALSE(r.abort_snapshot.empty());
}
