#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "mmcfrt/edd.hpp"

using namespace mmcfrt;

TEST_CASE("duty stays zero without an enable request") {
  SystemParams p;
  EddState st;
  CHECK(edd_control(1.09, false, st, p) == 0.0);
  CHECK_FALSE(st.active);
}

TEST_CASE("linear duty law between activation and ceiling") {
  SystemParams p;
  EddState st;
  CHECK(edd_control(1.08, true, st, p) == doctest::Approx(0.5));
  CHECK(edd_control(1.10, true, st, p) == doctest::Approx(1.0));
  CHECK(edd_control(1.20, true, st, p) == doctest::Approx(1.0));
}

TEST_CASE("no dissipation below the activation threshold") {
  SystemParams p;
  EddState st;
  CHECK(edd_control(1.05, true, st, p) == 0.0);
  CHECK_FALSE(st.active);
  CHECK(edd_control(1.0599, true, st, p) == 0.0);
}

TEST_CASE("release hysteresis") {
  SystemParams p;
  EddState st;
  edd_control(1.08, true, st, p);
  REQUIRE(st.active);
  edd_control(1.057, true, st, p);  // inside the 5 mpu band, stays armed
  CHECK(st.active);
  edd_control(1.054, true, st, p);
  CHECK_FALSE(st.active);
}

TEST_CASE("duty is monotone in the DC voltage") {
  SystemParams p;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(1.0, 1.2);
  std::vector<double> vs(1500);
  for (double& v : vs) v = u(rng);
  std::sort(vs.begin(), vs.end());
  double last = 0.0;
  EddState st;
  for (double v : vs) {
    const double d = edd_control(v, true, st, p);
    CHECK(d >= last);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    last = d;
  }
}

TEST_CASE("dissipated power follows duty * v^2 / R with a rating cap") {
  SystemParams p;  // R = 640 kV^2 / 294 MW
  EddState st;
  auto next = edd_step(st, 1.0, 640e3, 50e-6, p);
  CHECK(next.instantaneous_power_w == doctest::Approx(294e6));
  next = edd_step(st, 0.5, 640e3, 50e-6, p);
  CHECK(next.instantaneous_power_w == doctest::Approx(147e6));
  // overvoltage cannot push the chopper past its rating
  next = edd_step(st, 1.0, 1.2 * 640e3, 50e-6, p);
  CHECK(next.instantaneous_power_w == doctest::Approx(294e6));
}

TEST_CASE("cumulative energy is the power integral") {
  SystemParams p;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> du(0.0, 1.0), vu(600e3, 700e3);
  EddState st;
  double acc = 0;
  const double dt = 50e-6;
  double prev = 0;
  for (int i = 0; i < 2000; ++i) {
    st = edd_step(st, du(rng), vu(rng), dt, p);
    acc += st.instantaneous_power_w * dt;
    CHECK(st.cumulative_energy_j >= prev);  // never un-dissipates
    prev = st.cumulative_energy_j;
  }
  CHECK(st.cumulative_energy_j == doctest::Approx(acc).epsilon(1e-12));
}
