#include "mmcfrt/params.hpp"

#include <stdexcept>

namespace mmcfrt {

ValidationReport validate(const SystemParams& p) {
  ValidationReport r;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) r.violations.push_back(msg);
  };

  require(p.rated_power_w > 0, "non-positive rated power");
  require(p.dc_voltage_v > 0, "non-positive DC voltage");
  require(p.sm_per_arm >= 1, "sm_per_arm must be >= 1");
  require(p.sm_capacitance_f > 0, "non-positive capacitance");
  require(p.sm_rated_voltage_v > 0, "non-positive SM rated voltage");
  require(p.grid_frequency_hz > 0, "non-positive frequency");
  require(p.arm_inductance_h > 0, "non-positive arm inductance");
  require(p.transformer_reactance_pu > 0, "non-positive transformer reactance");
  require(p.ac_base_voltage_v > 0, "non-positive AC base voltage");
  require(p.dc_link_capacitance_f > 0, "non-positive DC link capacitance");
  require(p.dc_line_resistance_ohm > 0, "non-positive DC line resistance");
  require(p.dc_line_inductance_h > 0, "non-positive DC line inductance");
  require(p.edd_rated_power_w > 0, "non-positive EDD rating");
  require(p.comm_delay_s >= 0, "negative communication delay");
  require(p.turbine_rampdown_s >= 0, "negative turbine ramp-down time");
  require(p.cap_overvoltage_limit > 1, "cap_overvoltage_limit must exceed 1");
  require(p.edd_activation_pu < p.dc_overvoltage_limit_pu,
          "edd_activation_pu must be below dc_overvoltage_limit_pu");

  // With half the submodules inserted on average (m_u + m_l = 1) the leg
  // spans N * V0, which must match the pole-to-pole link voltage.
  if (p.sm_rated_voltage_v > 0 && p.dc_voltage_v > 0) {
    double leg_span = p.sm_per_arm * p.sm_rated_voltage_v;
    if (std::abs(leg_span - p.dc_voltage_v) > 0.05 * p.dc_voltage_v)
      r.violations.push_back("N*V0 deviates from V_dc by >5%");
  }
  return r;
}

PerUnitBase PerUnitBase::from(const SystemParams& p) {
  PerUnitBase b;
  b.s_base_va = p.rated_power_w;
  b.v_dc_base_v = p.dc_voltage_v;
  b.v_ac_base_v = p.ac_base_voltage_v;
  b.i_base_a = b.s_base_va / (std::sqrt(3.0) * b.v_ac_base_v);
  b.z_base_ohm = b.v_ac_base_v * b.v_ac_base_v / b.s_base_va;
  b.t_base_s = 1.0;
  return b;
}

static double base_of(const PerUnitBase& b, Quantity kind) {
  switch (kind) {
    case Quantity::Power: return b.s_base_va;
    case Quantity::VoltageDc: return b.v_dc_base_v;
    case Quantity::VoltageAc: return b.v_ac_base_v;
    case Quantity::Current: return b.i_base_a;
    case Quantity::Impedance: return b.z_base_ohm;
    case Quantity::Energy: return b.s_base_va * 1.0;  // joules per p.u.-second
    case Quantity::Time: return b.t_base_s;
  }
  throw std::invalid_argument("unknown quantity kind");
}

double to_pu(double value, const PerUnitBase& base, Quantity kind) {
  return value / base_of(base, kind);
}

double from_pu(double value, const PerUnitBase& base, Quantity kind) {
  return value * base_of(base, kind);
}

}  // namespace mmcfrt
