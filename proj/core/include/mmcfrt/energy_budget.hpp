#pragma once

#include "mmcfrt/params.hpp"
#include "mmcfrt/network.hpp"

namespace mmcfrt {

/// Energy bookkeeping over a fault window [t0, t1]. t0 is the fault onset,
/// t1 the instant the DC voltage re-enters 1.0 +/- 0.02 p.u. after clearance.
struct EnergyBudget {
  double t0_s = 0;
  double t1_s = 0;
  double surplus_integral_j = 0;   // integral of (P_wind - P_export)
  double delta_e_rec_j = 0;        // onshore MMC capacitor store
  double delta_e_sec_j = 0;        // offshore MMC capacitor store
  double delta_e_dclink_j = 0;     // terminal capacitances
  double edd_energy_j = 0;
  double losses_j = 0;             // series resistive losses
  double closure_residual_j = 0;   // surplus - (stores + EDD + losses)
};

/// Nominal stored energy of one MMC: 3*N*C*V0^2 (all 6N submodule
/// capacitors at the rated average voltage).
double nominal_energy(int n, double c_f, double v0_v);

/// P_wind - P_export; negative during recovery transients.
double surplus_power(double p_wind_w, double p_exported_w);

/// Average capacitor voltage after absorbing a given surplus:
/// sqrt(surplus/(3NC) + V0^2). Throws std::domain_error when the
/// radicand goes negative (capacitors cannot store negative energy).
double post_fault_voltage(double surplus_j, int n, double c_f, double v0_v);

/// 3*N*C*(V1^2 - V0^2); exact inverse of post_fault_voltage.
double delta_energy(int n, double c_f, double v0_v, double v1_v);

/// Residual energy left for the dissipation device: max(0, surplus - stored).
double edd_residual(double surplus_j, double stored_j);

/// Static power transfer across a reactance: Vs*Vr*sin(angle)/X.
double power_transfer(double v_send_v, double v_recv_v, double angle_rad,
                      double reactance_ohm);

/// Analytic (no-dynamics) EDD sizing for a given fault: assumes constant
/// wind output until the curtailment command arrives, then a linear ramp
/// to zero. Storage absorbs at most absorb_power_limit_pu of rated power
/// (the controller's droop cap) and at most the energy margin below the
/// ceilings; everything above is the EDD's residual.
struct EddSizingReport {
  double surplus_j = 0;          // worst-case surplus integral
  double storable_j = 0;         // what the SM capacitors can take in time
  double required_energy_j = 0;  // residual the EDD must absorb
  double peak_residual_power_w = 0;
  bool feasible = true;          // peak residual within the EDD rating
  double rec_ceiling_pu = 0;     // energy ceilings assumed for the margin
  double sec_ceiling_pu = 0;
};

EddSizingReport size_edd(const SystemParams& params, const FaultSpec& fault,
                         double rec_ceiling_pu = 1.65,
                         double sec_ceiling_pu = 1.2,
                         double absorb_power_limit_pu = 0.42);

}  // namespace mmcfrt
