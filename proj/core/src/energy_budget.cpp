#include "mmcfrt/energy_budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmcfrt {

double nominal_energy(int n, double c_f, double v0_v) {
  if (n < 0 || c_f < 0 || v0_v < 0)
    throw std::domain_error("nominal_energy: negative input");
  return 3.0 * n * c_f * v0_v * v0_v;
}

double surplus_power(double p_wind_w, double p_exported_w) {
  return p_wind_w - p_exported_w;
}

double post_fault_voltage(double surplus_j, int n, double c_f, double v0_v) {
  const double radicand = surplus_j / (3.0 * n * c_f) + v0_v * v0_v;
  if (radicand < 0)
    throw std::domain_error("post_fault_voltage: surplus below -E_MMC");
  return std::sqrt(radicand);
}

double delta_energy(int n, double c_f, double v0_v, double v1_v) {
  return 3.0 * n * c_f * (v1_v * v1_v - v0_v * v0_v);
}

double edd_residual(double surplus_j, double stored_j) {
  return std::max(0.0, surplus_j - stored_j);
}

double power_transfer(double v_send_v, double v_recv_v, double angle_rad,
                      double reactance_ohm) {
  if (reactance_ohm <= 0)
    throw std::domain_error("power_transfer: non-positive reactance");
  return v_send_v * v_recv_v * std::sin(angle_rad) / reactance_ohm;
}

EddSizingReport size_edd(const SystemParams& params, const FaultSpec& fault,
                         double rec_ceiling_pu, double sec_ceiling_pu,
                         double absorb_power_limit_pu) {
  EddSizingReport rep;
  rep.rec_ceiling_pu = rec_ceiling_pu;
  rep.sec_ceiling_pu = sec_ceiling_pu;
  if (fault.duration_s <= 0 || fault.kind == FaultKind::None) return rep;

  // Worst-case wind trajectory: rated output until the curtailment command
  // arrives, then a linear ramp to zero.
  const double p0 = params.rated_power_w;
  const double limit =
      exported_power_limit(fault, fault.onset_s, p0).phase_count_w;
  const double td = params.comm_delay_s;
  const double tr = params.turbine_rampdown_s;
  const double tf = fault.duration_s;

  auto wind_at = [&](double t) {  // t measured from fault onset
    if (t <= td) return p0;
    if (tr <= 0) return 0.0;
    return std::max(0.0, p0 * (1.0 - (t - td) / tr));
  };
  auto surplus_at = [&](double t) {
    return std::max(0.0, wind_at(t) - limit);
  };

  const double e_nom = nominal_energy(params.sm_per_arm,
                                      params.sm_capacitance_f,
                                      params.sm_rated_voltage_v);
  const double hard_pu =
      params.cap_overvoltage_limit * params.cap_overvoltage_limit;
  const double rec_margin = (std::min(rec_ceiling_pu, hard_pu) - 1.0) * e_nom;
  const double sec_margin = (std::min(sec_ceiling_pu, hard_pu) - 1.0) * e_nom;
  const double margin_e =
      std::max(0.0, rec_margin) + std::max(0.0, sec_margin);
  const double absorb_cap_w = absorb_power_limit_pu * p0;

  // Forward pass over the fault window: storage absorbs up to its power cap
  // while energy margin remains; the rest is the EDD's residual. The profile
  // is piecewise linear so a fine fixed grid is exact to rounding.
  const int kSteps = 20000;
  const double h = tf / kSteps;
  double stored = 0;
  double peak_residual = 0;
  for (int i = 0; i < kSteps; ++i) {
    const double t = (i + 0.5) * h;  // midpoint rule
    const double s = surplus_at(t);
    const double want = std::min(s, absorb_cap_w);
    const double take = std::min(want, (margin_e - stored) / h);
    stored += take * h;
    rep.surplus_j += s * h;
    rep.required_energy_j += (s - take) * h;
    peak_residual = std::max(peak_residual, s - take);
  }
  rep.storable_j = stored;
  rep.peak_residual_power_w = peak_residual;
  rep.feasible = peak_residual <= params.edd_rated_power_w;
  return rep;
}

}  // namespace mmcfrt
