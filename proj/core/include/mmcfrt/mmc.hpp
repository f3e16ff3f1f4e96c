#pragma once

#include "mmcfrt/params.hpp"
#include "mmcfrt/transforms.hpp"

namespace mmcfrt {

struct ModulationPair {
  double m_upper = 0.5;
  double m_lower = 0.5;
  bool clamped = false;  // set when the combination hit a [0,1] bound
};

/// Averaged state of one MMC: all 6N submodule capacitors lumped into a
/// single average voltage.
struct MmcState {
  double cap_voltage_avg_v = 0;
  double i_d_a = 0;
  double i_q_a = 0;
  double i_dc_a = 0;

  double stored_energy_j(const SystemParams& p) const {
    return p.lumped_cap_f() * cap_voltage_avg_v * cap_voltage_avg_v;
  }
  double energy_pu(const SystemParams& p) const {
    const double v0 = p.sm_rated_voltage_v;
    return (cap_voltage_avg_v * cap_voltage_avg_v) / (v0 * v0);
  }
};

struct ArmVoltages {
  double upper_v = 0;
  double lower_v = 0;
};

/// Components of the arm voltage: a DC term, an AC term per phase and a
/// circulating term (identically zero in this averaged model).
struct ArmVoltageDecomposition {
  double v_dc_component_v = 0;   // half-link term
  double v_ac_component_v = 0;
  double v_circ_component_v = 0;
};

/// upper = m_u * N * v_c, lower = m_l * N * v_c. Their sum is the inserted
/// DC voltage, their difference twice the AC drive.
ArmVoltages synthesize_arm_voltages(const ModulationPair& mod,
                                    const MmcState& state, int n);

ArmVoltageDecomposition decompose_arm_voltages(const ArmVoltages& arms);

/// Exact discrete energy update: v(t+dt) = sqrt(v^2 + (p_in - p_out)*dt/3NC),
/// so the stored energy changes by exactly (p_in - p_out)*dt. Throws
/// ProtectionError on depletion (radicand <= 0) or when the average voltage
/// exceeds cap_overvoltage_limit * V0.
MmcState capacitor_dynamics_step(const MmcState& state, double p_ac_in_w,
                                 double p_dc_out_w, double dt_s,
                                 const SystemParams& params);

struct AcPower {
  double p_w = 0;
  double q_var = 0;
};

/// Peak-phase convention: P = (3/2)(vd*id + vq*iq), Q = (3/2)(vq*id - vd*iq).
AcPower ac_power(const MmcState& state, const DqPair& v_pcc_dq);

}  // namespace mmcfrt
