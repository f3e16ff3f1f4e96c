#pragma once

namespace mmcfrt {

/// Aggregated offshore wind farm output profile: constant rated power, with
/// communication-delayed linear curtailment after a fault and a ramped
/// recovery after clearance.
struct WindProfile {
  double rated_power_w = 420e6;
  double comm_delay_s = 0.040;
  double rampdown_s = 0.240;
  double recovery_s = 0.200;
  bool curtailment_enabled = true;
};

/// Output power at time t. Continuous in t: ramps only, no jumps.
/// fault_onset < 0 means no fault in the scenario. cleared_at is the fault
/// clearance time (recovery ramps from the output held at that instant).
double wind_power(double t, double fault_onset, double cleared_at,
                  const WindProfile& profile);

}  // namespace mmcfrt
