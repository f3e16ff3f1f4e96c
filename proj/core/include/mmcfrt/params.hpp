#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace mmcfrt {

/// Ratings, model constants and protection thresholds of the point-to-point
/// MMC-HVDC link. Immutable after validation; safe to share between runs.
struct SystemParams {
  // Ratings
  double rated_power_w = 420e6;       // wind farm / link rating
  double dc_voltage_v = 640e3;        // pole-to-pole
  int sm_per_arm = 76;                // N
  double sm_capacitance_f = 3000e-6;  // C per submodule
  double sm_rated_voltage_v = 8420;   // V0, nominal average capacitor voltage
  double grid_frequency_hz = 50.0;

  // AC-side equivalent (assumed values, not part of the station ratings)
  double arm_inductance_h = 0.067;        // ~0.08 p.u. on 333 kV / 420 MVA
  double transformer_reactance_pu = 0.12;
  double ac_base_voltage_v = 333e3;       // line-to-line RMS at the PCC

  // DC link
  double dc_link_capacitance_f = 30e-6;  // lumped cable+terminal, per pole
  double dc_line_resistance_ohm = 0.5;
  double dc_line_inductance_h = 0.04;

  // Protection and energy limits
  double cap_overvoltage_limit = 1.5;    // hard ceiling on v_c / V0
  double edd_activation_pu = 1.06;       // chopper engages above this
  double dc_overvoltage_limit_pu = 1.10; // protection ceiling, run aborts
  double edd_rated_power_w = 294e6;      // 0.7 p.u.; see README on sizing

  // Offshore wind response
  double comm_delay_s = 0.040;      // fault detection to curtailment command
  double turbine_rampdown_s = 0.240; // command to zero output

  double arm_count() const { return static_cast<double>(sm_per_arm); }
  /// 3NC, the lumped capacitance seen by the aggregate energy state.
  double lumped_cap_f() const { return 3.0 * sm_per_arm * sm_capacitance_f; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks physical consistency of a parameter set. Pure; a failing report
/// blocks simulation start.
ValidationReport validate(const SystemParams& p);

enum class Quantity {
  Power,
  VoltageDc,
  VoltageAc,
  Current,
  Impedance,
  Energy,   // base is s_base * 1 s
  Time,
};

/// Per-unit bases derived from the system ratings.
struct PerUnitBase {
  double s_base_va = 0;
  double v_dc_base_v = 0;
  double v_ac_base_v = 0;  // line-to-line RMS
  double i_base_a = 0;
  double z_base_ohm = 0;
  double t_base_s = 0;

  static PerUnitBase from(const SystemParams& p);
};

double to_pu(double value, const PerUnitBase& base, Quantity kind);
double from_pu(double value, const PerUnitBase& base, Quantity kind);

}  // namespace mmcfrt
