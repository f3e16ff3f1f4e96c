#include <doctest.h>

#include <cmath>
#include <random>

#include "mmcfrt/control.hpp"
#include "mmcfrt/errors.hpp"

using namespace mmcfrt;

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

TEST_CASE("modulation combination") {
  const auto mp = combine_modulation(0.5, 0.4);
  CHECK(mp.m_upper == doctest::Approx(0.1));
  CHECK(mp.m_lower == doctest::Approx(0.9));
  CHECK_FALSE(mp.clamped);

  const auto sat = combine_modulation(0.5, 0.7);
  CHECK(sat.m_upper == 0.0);
  CHECK(sat.m_lower == 1.0);
  CHECK(sat.clamped);
}

TEST_CASE("combination preserves DC and AC components when unclamped") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dc(0.0, 1.0), ac(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double m_dc = dc(rng), m_ac = ac(rng);
    const auto mp = combine_modulation(m_dc, m_ac);
    CHECK(mp.m_upper >= 0.0);
    CHECK(mp.m_upper <= 1.0);
    CHECK(mp.m_lower >= 0.0);
    CHECK(mp.m_lower <= 1.0);
    if (!mp.clamped) {
      CHECK(0.5 * (mp.m_upper + mp.m_lower) == doctest::Approx(m_dc));
      CHECK(0.5 * (mp.m_lower - mp.m_upper) == doctest::Approx(m_ac));
    }
  }
}

TEST_CASE("M_dc tracks the link reference over the capacitor voltage") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  auto out = energy_controller_step(420e6, 420e6, 1.0, 8420, st, p, g, 50e-6);
  CHECK(out.m_dc == doctest::Approx(0.50006).epsilon(1e-4));
  CHECK(out.stage == FrtStage::Normal);

  EnergyControllerState st2;
  out = energy_controller_step(420e6, 420e6, 1.0, 10820, st2, p, g, 50e-6);
  CHECK(out.m_dc == doctest::Approx(0.38914).epsilon(1e-4));
}

TEST_CASE("stage machine walks Normal -> Storing -> Dissipating -> Normal") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  const double dt = 50e-6;

  auto out = energy_controller_step(420e6, 420e6, 1.0, 8420, st, p, g, dt);
  CHECK(out.stage == FrtStage::Normal);
  CHECK_FALSE(out.edd_enable_request);

  out = energy_controller_step(420e6, 0.0, 1.03, 8420, st, p, g, dt);
  CHECK(out.stage == FrtStage::Storing);
  CHECK_FALSE(out.edd_enable_request);

  out = energy_controller_step(420e6, 0.0, 1.08, 8420, st, p, g, dt);
  CHECK(out.stage == FrtStage::Dissipating);
  CHECK(out.edd_enable_request);

  // negative surplus and a settled link release the controller
  out = energy_controller_step(0.0, 420e6, 1.0, 9000, st, p, g, dt);
  CHECK(out.stage == FrtStage::Normal);
  CHECK_FALSE(out.edd_enable_request);
}

TEST_CASE("storing at the energy ceiling hands over to dissipation") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  const double dt = 50e-6;
  energy_controller_step(420e6, 0.0, 1.03, 8420, st, p, g, dt);
  CHECK(st.stage == FrtStage::Storing);
  // capacitors at the 1.65 p.u. energy ceiling
  const double v_full = 8420 * std::sqrt(1.65);
  auto out = energy_controller_step(420e6, 0.0, 1.03, v_full, st, p, g, dt);
  CHECK(out.stage == FrtStage::Dissipating);
  CHECK(out.edd_enable_request);
  // absorption tapers to zero at the ceiling
  CHECK(out.store_power_w < 0.01 * p.rated_power_w);
}

TEST_CASE("absorption command is capped and lag-filtered") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  const double dt = 50e-6;
  double last = 0;
  for (int i = 0; i < 4000; ++i) {
    const auto out =
        energy_controller_step(420e6, 0.0, 1.09, 8420, st, p, g, dt);
    CHECK(out.store_power_w >= last - 1e-6);  // monotone approach
    CHECK(out.store_power_w <=
          g.storing_power_limit_pu * p.rated_power_w + 1e-6);
    last = out.store_power_w;
  }
  CHECK(last ==
        doctest::Approx(g.storing_power_limit_pu * p.rated_power_w)
            .epsilon(1e-3));
}

TEST_CASE("stored excess discharges after clearance") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  const double dt = 50e-6;
  const double v_hot = 8420 * std::sqrt(1.3);
  double p_store = 0;
  for (int i = 0; i < 2000; ++i)
    p_store =
        energy_controller_step(0.0, 420e6, 1.0, v_hot, st, p, g, dt)
            .store_power_w;
  CHECK(p_store < 0.0);  // energy flowing back into the link
}

TEST_CASE("controller rejects a dead capacitor bank") {
  SystemParams p;
  ControlGains g;
  EnergyControllerState st;
  CHECK_THROWS_AS(
      energy_controller_step(0.0, 0.0, 1.0, 0.0, st, p, g, 50e-6),
      ProtectionError);
}

TEST_CASE("PLL locks onto a balanced source") {
  ControlGains g;
  PllState st;
  const double v_pk = 333e3 * std::sqrt(2.0 / 3.0);
  const double w = kTwoPi * 50.0;
  const double dt = 1e-4;
  const double phi0 = 0.5;
  DqPair vdq{};
  for (int i = 0; i < 5000; ++i) {
    const double wt = w * i * dt + phi0;
    std::array<double, 3> abc{v_pk * std::cos(wt),
                              v_pk * std::cos(wt - kTwoPi / 3.0),
                              v_pk * std::cos(wt + kTwoPi / 3.0)};
    vdq = pll_step(abc, st, dt, g, v_pk);
  }
  CHECK(st.omega_rad_s == doctest::Approx(w).epsilon(5e-3));
  CHECK(std::abs(vdq.q) < 0.01 * v_pk);
  CHECK(vdq.d == doctest::Approx(v_pk).epsilon(0.01));
}

TEST_CASE("PLL freewheels through a dead bus") {
  ControlGains g;
  PllState st;
  const double v_pk = 333e3 * std::sqrt(2.0 / 3.0);
  const double w = kTwoPi * 50.0;
  const double dt = 1e-4;
  for (int i = 0; i < 5000; ++i) {
    const double wt = w * i * dt;
    std::array<double, 3> abc{v_pk * std::cos(wt),
                              v_pk * std::cos(wt - kTwoPi / 3.0),
                              v_pk * std::cos(wt + kTwoPi / 3.0)};
    pll_step(abc, st, dt, g, v_pk);
  }
  const double w_locked = st.omega_rad_s;
  for (int i = 0; i < 1000; ++i)
    pll_step({0.0, 0.0, 0.0}, st, dt, g, v_pk);
  CHECK(st.omega_rad_s == doctest::Approx(w_locked));
}

TEST_CASE("outer loop polarity and current limit") {
  ControlGains g;
  const auto base = PerUnitBase::from(SystemParams{});
  const double v_pk = base.v_ac_base_v * std::sqrt(2.0 / 3.0);
  const double i_pk_base = base.s_base_va / (1.5 * v_pk);

  OuterLoopState st;
  auto refs = outer_loop_step(1.05 * 640e3, 640e3, 0, 0, st, 50e-6, g, base);
  CHECK(refs.i_d_ref_a > 0);  // overvoltage exports harder

  OuterLoopState st2;
  refs = outer_loop_step(2.0 * 640e3, 640e3, 0, 0, st2, 50e-6, g, base);
  CHECK(refs.i_d_ref_a ==
        doctest::Approx(g.current_limit_pu * i_pk_base).epsilon(1e-9));
}

TEST_CASE("inner loop feedforward with zero tracking error") {
  SystemParams p;
  ControlGains g;
  InnerLoopState st;
  const DqPair i_meas{1000, -500};
  const CurrentRefs refs{1000, -500};
  const DqPair v_pcc{271892, 0};
  const double n_vc = 76.0 * 8420.0;
  const auto out =
      inner_current_loop(i_meas, refs, v_pcc, st, 50e-6, g, p, n_vc);

  const double z_base = p.ac_base_voltage_v * p.ac_base_voltage_v /
                        p.rated_power_w;
  const double w = kTwoPi * p.grid_frequency_hz;
  const double l_eq = p.transformer_reactance_pu * z_base / w +
                      0.5 * p.arm_inductance_h;
  CHECK(out.v_conv_dq_v.d == doctest::Approx(v_pcc.d - w * l_eq * i_meas.q));
  CHECK(out.v_conv_dq_v.q == doctest::Approx(v_pcc.q + w * l_eq * i_meas.d));
  CHECK(out.m_ac_dq.d == doctest::Approx(out.v_conv_dq_v.d / n_vc));
}

TEST_CASE("V/f control holds the commanded magnitude") {
  SystemParams p;
  ControlGains g;
  VfState st;
  st.amplitude.integrator = 1.0;
  const double v_ref = 271892;
  const double dt = 50e-6;
  auto out = vf_control(v_ref, 50.0, v_ref, st, dt, g, p, 76.0 * 8420.0);
  CHECK(out.v_cmd_v == doctest::Approx(v_ref));
  CHECK(out.angle_rad == doctest::Approx(kTwoPi * 50.0 * dt));

  // a sagging bus raises the command
  out = vf_control(0.9 * v_ref, 50.0, v_ref, st, dt, g, p, 76.0 * 8420.0);
  CHECK(out.v_cmd_v > v_ref);
}

TEST_CASE("stage names") {
  CHECK(std::string(to_string(FrtStage::Normal)) == "Normal");
  CHECK(std::string(to_string(FrtStage::Storing)) == "Storing");
  CHECK(std::string(to_string(FrtStage::Dissipating)) == "Dissipating");
}
