#pragma once

#include <array>

#include "mmcfrt/mmc.hpp"
#include "mmcfrt/params.hpp"
#include "mmcfrt/transforms.hpp"

namespace mmcfrt {

/// PI with output clamp and conditional anti-windup.
struct PiController {
  double kp = 0;
  double ki = 0;
  double out_min = -1e300;
  double out_max = 1e300;
  double integrator = 0;

  double step(double error, double dt) {
    double u = kp * error + integrator + ki * error * dt;
    if (u > out_max) {
      u = out_max;
    } else if (u < out_min) {
      u = out_min;
    } else {
      integrator += ki * error * dt;
    }
    return u;
  }
};

/// Loop gains and energy-controller thresholds. All scenario-configurable;
/// defaults give a 3 ms inner and ~30 ms outer closed-loop time constant.
struct ControlGains {
  // PLL (second order, zeta = 0.7, wn = 100 rad/s on per-unit voltage)
  double pll_kp = 140.0;
  double pll_ki = 10000.0;

  // Outer loops, per-unit error -> per-unit current reference
  double outer_vdc_kp = 8.0;
  double outer_vdc_ki = 150.0;
  double outer_q_kp = 0.5;
  double outer_q_ki = 30.0;
  double current_limit_pu = 1.3;

  // Inner current loop time constant
  double inner_tau_s = 0.003;
  double series_resistance_pu = 0.005;

  // Offshore V/f regulation
  double vf_kp = 3.0;
  double vf_ki = 600.0;

  // Energy controller (onshore DC modulation)
  double storing_trigger_pu = 1.02;   // DC deadband before Storing
  double storing_droop = 12.0;        // p.u. power per p.u. overvoltage
  double storing_power_limit_pu = 0.42;
  double rec_energy_ceiling_pu = 1.65;
  double storing_taper_pu = 0.03;     // soft landing width below the ceiling
  double recovery_tau_s = 0.15;       // stored-excess discharge constant
  double command_lag_s = 0.002;       // actuator smoothing on store power

  // Offshore overvoltage absorption (back-charging through the converter)
  double sec_divert_threshold_pu = 1.07;
  double sec_divert_droop = 16.7;
  double sec_energy_ceiling_pu = 1.2;
  double sec_emergency_pu = 1.095;    // above this the soft ceiling is ignored
};

enum class FrtStage { Normal, Storing, Dissipating };

const char* to_string(FrtStage s);

struct PllState {
  double angle_rad = 0;
  double integrator = 0;   // frequency correction state (rad/s)
  double omega_rad_s = 0;  // last tracked speed, used to freewheel
};

/// Synchronous-reference-frame PLL. With zero input voltage the q-error is
/// zero and the angle freewheels at the last tracked frequency.
DqPair pll_step(const std::array<double, 3>& v_pcc_abc, PllState& state,
                double dt_s, const ControlGains& g, double v_base_peak_v);

struct OuterLoopState {
  PiController vdc;
  PiController q;
};

struct CurrentRefs {
  double i_d_ref_a = 0;
  double i_q_ref_a = 0;
};

CurrentRefs outer_loop_step(double v_dc_meas_v, double v_dc_ref_v,
                            double q_meas_var, double q_ref_var,
                            OuterLoopState& state, double dt_s,
                            const ControlGains& g, const PerUnitBase& base);

struct InnerLoopState {
  PiController id;
  PiController iq;
};

struct InnerLoopOut {
  DqPair v_conv_dq_v;  // commanded converter terminal voltage
  DqPair m_ac_dq;      // normalized by N * v_c
};

InnerLoopOut inner_current_loop(const DqPair& i_dq_meas_a,
                                const CurrentRefs& refs,
                                const DqPair& v_pcc_dq_v,
                                InnerLoopState& state, double dt_s,
                                const ControlGains& g,
                                const SystemParams& p, double n_vc_v);

struct VfState {
  double angle_rad = 0;
  PiController amplitude;
};

struct VfOut {
  double angle_rad = 0;
  double v_cmd_v = 0;   // commanded bus voltage magnitude (peak phase)
  double m_ac_mag = 0;  // normalized by N * v_c
};

/// Grid-forming control of the offshore converter: open-loop angle ramp at
/// f_ref plus PI amplitude regulation. Uses no onshore measurements.
VfOut vf_control(double v_bus_mag_v, double f_ref_hz, double v_ref_v,
                 VfState& state, double dt_s, const ControlGains& g,
                 const SystemParams& p, double n_vc_v);

struct EnergyControllerState {
  FrtStage stage = FrtStage::Normal;
  double mdc_value = 0.5;
  double store_power_w = 0;   // lag-filtered absorption command
  bool storing_seen = false;  // Dissipating requires Storing first
};

struct EnergyControllerOut {
  double m_dc = 0.5;
  FrtStage stage = FrtStage::Normal;
  bool edd_enable_request = false;
  double store_power_w = 0;  // power drawn from the DC bus into SM capacitors
};

/// Two-stage FRT energy controller of the onshore converter. M_dc tracks
/// V_dc,ref / (2 N v_c), which holds the inserted DC voltage at its
/// reference while the capacitors absorb surplus. Absorption follows a
/// droop on the DC overvoltage, capped in power and tapered at the energy
/// ceiling; the EDD request asserts at the ceiling or above the activation
/// threshold. Stored excess is discharged back after clearance.
EnergyControllerOut energy_controller_step(double p_wind_w,
                                           double p_exported_w,
                                           double v_dc_pu, double v_cap_avg_v,
                                           EnergyControllerState& state,
                                           const SystemParams& params,
                                           const ControlGains& g, double dt_s);

/// m_upper = clamp(M_dc - m_ac, 0, 1), m_lower = clamp(M_dc + m_ac, 0, 1).
ModulationPair combine_modulation(double m_dc, double m_ac_phase);

}  // namespace mmcfrt
