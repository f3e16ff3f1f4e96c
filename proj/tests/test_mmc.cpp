#include <doctest.h>

#include <random>

#include "mmcfrt/errors.hpp"
#include "mmcfrt/mmc.hpp"

using namespace mmcfrt;

TEST_CASE("arm synthesis at the nominal operating point") {
  MmcState s;
  s.cap_voltage_avg_v = 8420;
  const auto arms = synthesize_arm_voltages({0.5, 0.5}, s, 76);
  CHECK(arms.upper_v == doctest::Approx(319960.0));
  CHECK(arms.lower_v == doctest::Approx(319960.0));
  // upper + lower reconstructs the pole-to-pole link voltage within 5%
  CHECK(arms.upper_v + arms.lower_v == doctest::Approx(640e3).epsilon(0.05));
}

TEST_CASE("decomposition inverts synthesis") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> m(0.0, 1.0), v(1000, 13000);
  for (int i = 0; i < 2000; ++i) {
    MmcState s;
    s.cap_voltage_avg_v = v(rng);
    ModulationPair mp{m(rng), m(rng)};
    const auto arms = synthesize_arm_voltages(mp, s, 76);
    const auto d = decompose_arm_voltages(arms);
    const double nv = 76 * s.cap_voltage_avg_v;
    CHECK(d.v_dc_component_v ==
          doctest::Approx(0.5 * (mp.m_upper + mp.m_lower) * nv));
    CHECK(d.v_ac_component_v ==
          doctest::Approx(0.5 * (mp.m_lower - mp.m_upper) * nv));
    CHECK(d.v_circ_component_v == 0.0);
  }
}

TEST_CASE("single capacitor step at rated charging power") {
  SystemParams p;
  MmcState s;
  s.cap_voltage_avg_v = 8420;
  const auto next = capacitor_dynamics_step(s, 420e6, 0.0, 50e-6, p);
  CHECK(next.cap_voltage_avg_v == doctest::Approx(8421.823).epsilon(1e-6));
}

TEST_CASE("discrete update conserves energy exactly") {
  SystemParams p;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pw(-50e6, 50e6);
  MmcState s;
  s.cap_voltage_avg_v = p.sm_rated_voltage_v;
  const double e0 = s.stored_energy_j(p);
  double fed = 0;
  const double dt = 50e-6;
  for (int i = 0; i < 1000; ++i) {
    const double pin = pw(rng) + 10e6;  // slight charging bias
    s = capacitor_dynamics_step(s, pin, 0.0, dt, p);
    fed += pin * dt;
  }
  CHECK(s.stored_energy_j(p) - e0 == doctest::Approx(fed).epsilon(1e-9));
}

TEST_CASE("depletion trips protection") {
  SystemParams p;
  MmcState s;
  s.cap_voltage_avg_v = 500;
  CHECK_THROWS_AS(capacitor_dynamics_step(s, 0.0, 420e6, 1e-2, p),
                  ProtectionError);
}

TEST_CASE("overvoltage trips protection at 1.5 V0") {
  SystemParams p;
  MmcState s;
  s.cap_voltage_avg_v = 1.499 * p.sm_rated_voltage_v;
  CHECK_THROWS_AS(capacitor_dynamics_step(s, 420e6, 0.0, 0.1, p),
                  ProtectionError);
  // just below the limit passes
  s.cap_voltage_avg_v = 1.4 * p.sm_rated_voltage_v;
  CHECK_NOTHROW(capacitor_dynamics_step(s, 1e6, 0.0, 50e-6, p));
}

TEST_CASE("dq power in the peak-phase convention") {
  MmcState s;
  s.i_d_a = 2;
  s.i_q_a = -3;
  const auto pq = ac_power(s, DqPair{100, 50});
  CHECK(pq.p_w == doctest::Approx(1.5 * (100 * 2 + 50 * -3)));
  CHECK(pq.q_var == doctest::Approx(1.5 * (50 * 2 - 100 * -3)));
}

TEST_CASE("energy bookkeeping helpers agree") {
  SystemParams p;
  MmcState s;
  s.cap_voltage_avg_v = 1.2 * p.sm_rated_voltage_v;
  CHECK(s.energy_pu(p) == doctest::Approx(1.44));
  CHECK(s.stored_energy_j(p) ==
        doctest::Approx(1.44 * p.lumped_cap_f() * p.sm_rated_voltage_v *
                        p.sm_rated_voltage_v));
}
