#include "mmcfrt/mmc.hpp"

#include <cmath>

#include "mmcfrt/errors.hpp"

namespace mmcfrt {

ArmVoltages synthesize_arm_voltages(const ModulationPair& mod,
                                    const MmcState& state, int n) {
  const double nv = n * state.cap_voltage_avg_v;
  return {mod.m_upper * nv, mod.m_lower * nv};
}

ArmVoltageDecomposition decompose_arm_voltages(const ArmVoltages& arms) {
  ArmVoltageDecomposition d;
  d.v_dc_component_v = 0.5 * (arms.upper_v + arms.lower_v);
  d.v_ac_component_v = 0.5 * (arms.lower_v - arms.upper_v);
  d.v_circ_component_v = 0.0;
  return d;
}

MmcState capacitor_dynamics_step(const MmcState& state, double p_ac_in_w,
                                 double p_dc_out_w, double dt_s,
                                 const SystemParams& params) {
  const double cap = params.lumped_cap_f();
  const double v = state.cap_voltage_avg_v;
  const double radicand = v * v + (p_ac_in_w - p_dc_out_w) * dt_s / cap;
  if (radicand <= 0)
    throw ProtectionError("capacitor depletion: net discharge below zero energy",
                          0.0);
  MmcState next = state;
  next.cap_voltage_avg_v = std::sqrt(radicand);
  if (next.cap_voltage_avg_v >
      params.cap_overvoltage_limit * params.sm_rated_voltage_v)
    throw ProtectionError("capacitor overvoltage: average exceeds limit * V0",
                          0.0);
  return next;
}

AcPower ac_power(const MmcState& state, const DqPair& v_pcc_dq) {
  const double vd = v_pcc_dq.d, vq = v_pcc_dq.q;
  return {1.5 * (vd * state.i_d_a + vq * state.i_q_a),
          1.5 * (vq * state.i_d_a - vd * state.i_q_a)};
}

}  // namespace mmcfrt
