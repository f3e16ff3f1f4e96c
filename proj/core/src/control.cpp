#include "mmcfrt/control.hpp"

#include <algorithm>
#include <cmath>

#include "mmcfrt/errors.hpp"

namespace mmcfrt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

const char* to_string(FrtStage s) {
  switch (s) {
    case FrtStage::Normal: return "Normal";
    case FrtStage::Storing: return "Storing";
    case FrtStage::Dissipating: return "Dissipating";
  }
  return "?";
}

DqPair pll_step(const std::array<double, 3>& v_pcc_abc, PllState& state,
                double dt_s, const ControlGains& g, double v_base_peak_v) {
  const DqPair vdq = abc_to_dq(v_pcc_abc, state.angle_rad);
  const double eq = vdq.q / v_base_peak_v;  // normalized q error
  state.integrator += g.pll_ki * eq * dt_s;
  state.omega_rad_s = state.integrator + g.pll_kp * eq;
  state.angle_rad = wrap_angle(state.angle_rad + state.omega_rad_s * dt_s);
  return vdq;
}

CurrentRefs outer_loop_step(double v_dc_meas_v, double v_dc_ref_v,
                            double q_meas_var, double q_ref_var,
                            OuterLoopState& state, double dt_s,
                            const ControlGains& g, const PerUnitBase& base) {
  state.vdc.kp = g.outer_vdc_kp;
  state.vdc.ki = g.outer_vdc_ki;
  state.vdc.out_min = -g.current_limit_pu;
  state.vdc.out_max = g.current_limit_pu;
  state.q.kp = g.outer_q_kp;
  state.q.ki = g.outer_q_ki;
  state.q.out_min = -g.current_limit_pu;
  state.q.out_max = g.current_limit_pu;

  // Higher DC voltage -> export more.
  const double e_vdc = (v_dc_meas_v - v_dc_ref_v) / v_dc_ref_v;
  const double e_q = (q_ref_var - q_meas_var) / base.s_base_va;
  const double id_pu = state.vdc.step(e_vdc, dt_s);
  const double iq_pu = state.q.step(e_q, dt_s);

  // Current base in peak-phase convention: S = 3/2 * Vpk * Ipk.
  const double v_pk = base.v_ac_base_v * std::sqrt(2.0 / 3.0);
  const double i_pk_base = base.s_base_va / (1.5 * v_pk);
  return {id_pu * i_pk_base, iq_pu * i_pk_base};
}

InnerLoopOut inner_current_loop(const DqPair& i_dq_meas_a,
                                const CurrentRefs& refs,
                                const DqPair& v_pcc_dq_v,
                                InnerLoopState& state, double dt_s,
                                const ControlGains& g,
                                const SystemParams& p, double n_vc_v) {
  const double base_z = p.ac_base_voltage_v * p.ac_base_voltage_v /
                        p.rated_power_w;
  const double omega = kTwoPi * p.grid_frequency_hz;
  const double l_eq = p.transformer_reactance_pu * base_z / omega +
                      0.5 * p.arm_inductance_h;
  const double r_eq = g.series_resistance_pu * base_z;

  const double kp = l_eq / g.inner_tau_s;
  const double ki = r_eq / g.inner_tau_s;
  state.id.kp = kp;
  state.id.ki = ki;
  state.iq.kp = kp;
  state.iq.ki = ki;
  const double v_max = 1.5 * p.ac_base_voltage_v * std::sqrt(2.0 / 3.0);
  state.id.out_min = state.iq.out_min = -v_max;
  state.id.out_max = state.iq.out_max = v_max;

  const double ud = state.id.step(refs.i_d_ref_a - i_dq_meas_a.d, dt_s);
  const double uq = state.iq.step(refs.i_q_ref_a - i_dq_meas_a.q, dt_s);

  InnerLoopOut out;
  out.v_conv_dq_v = {v_pcc_dq_v.d + ud - omega * l_eq * i_dq_meas_a.q,
                     v_pcc_dq_v.q + uq + omega * l_eq * i_dq_meas_a.d};
  out.m_ac_dq = {out.v_conv_dq_v.d / n_vc_v, out.v_conv_dq_v.q / n_vc_v};
  return out;
}

VfOut vf_control(double v_bus_mag_v, double f_ref_hz, double v_ref_v,
                 VfState& state, double dt_s, const ControlGains& g,
                 const SystemParams& p, double n_vc_v) {
  state.angle_rad = wrap_angle(state.angle_rad + kTwoPi * f_ref_hz * dt_s);
  state.amplitude.kp = g.vf_kp;
  state.amplitude.ki = g.vf_ki;
  state.amplitude.out_min = 0;
  state.amplitude.out_max = 1.5;
  const double err = (v_ref_v - v_bus_mag_v) / v_ref_v;
  const double trim = state.amplitude.step(err, dt_s);
  VfOut out;
  out.angle_rad = state.angle_rad;
  out.v_cmd_v = v_ref_v * trim;
  out.m_ac_mag = out.v_cmd_v / n_vc_v;
  (void)p;
  return out;
}

EnergyControllerOut energy_controller_step(double p_wind_w,
                                           double p_exported_w,
                                           double v_dc_pu, double v_cap_avg_v,
                                           EnergyControllerState& state,
                                           const SystemParams& params,
                                           const ControlGains& g, double dt_s) {
  if (v_cap_avg_v <= 0)
    throw ProtectionError("energy controller: non-positive capacitor voltage",
                          0.0);

  (void)p_wind_w;
  (void)p_exported_w;
  const double v0 = params.sm_rated_voltage_v;
  const double e_pu = (v_cap_avg_v * v_cap_avg_v) / (v0 * v0);
  const double trigger = g.storing_trigger_pu;
  const double release = trigger - 0.005;  // hysteresis on the way down

  // Stage machine: Normal -> Storing -> Dissipating -> ... -> Normal.
  switch (state.stage) {
    case FrtStage::Normal:
      if (v_dc_pu > trigger) {
        state.stage = FrtStage::Storing;
        state.storing_seen = true;
      }
      break;
    case FrtStage::Storing:
      if (e_pu >= g.rec_energy_ceiling_pu - g.storing_taper_pu ||
          v_dc_pu > params.edd_activation_pu) {
        state.stage = FrtStage::Dissipating;
      } else if (v_dc_pu < release) {
        state.stage = FrtStage::Normal;
      }
      break;
    case FrtStage::Dissipating:
      if (v_dc_pu < release) state.stage = FrtStage::Normal;
      break;
  }

  // Absorption command: droop on the DC overvoltage, capped in power and
  // tapered near the energy ceiling.
  double p_cmd = 0;
  if (state.stage != FrtStage::Normal) {
    const double droop_pu =
        std::clamp(g.storing_droop * (v_dc_pu - trigger), 0.0,
                   g.storing_power_limit_pu);
    const double headroom =
        clamp01((g.rec_energy_ceiling_pu - e_pu) / g.storing_taper_pu);
    p_cmd = droop_pu * headroom * params.rated_power_w;
  } else if (e_pu > 1.0 && v_dc_pu < trigger) {
    // Post-clearance discharge of the stored excess back into the link.
    const double e_nom = params.lumped_cap_f() * v0 * v0;
    p_cmd = -(e_pu - 1.0) * e_nom / g.recovery_tau_s;
  }

  // First-order actuator lag keeps the command slew-bounded.
  const double alpha = dt_s / (g.command_lag_s + dt_s);
  state.store_power_w += alpha * (p_cmd - state.store_power_w);

  state.mdc_value =
      std::clamp(params.dc_voltage_v / (2.0 * params.sm_per_arm * v_cap_avg_v),
                 0.3, 0.6);

  EnergyControllerOut out;
  out.m_dc = state.mdc_value;
  out.stage = state.stage;
  out.edd_enable_request = state.stage == FrtStage::Dissipating;
  out.store_power_w = state.store_power_w;
  return out;
}

ModulationPair combine_modulation(double m_dc, double m_ac_phase) {
  ModulationPair mp;
  const double up = m_dc - m_ac_phase;
  const double lo = m_dc + m_ac_phase;
  mp.m_upper = clamp01(up);
  mp.m_lower = clamp01(lo);
  mp.clamped = (up != mp.m_upper) || (lo != mp.m_lower);
  return mp;
}

}  // namespace mmcfrt
