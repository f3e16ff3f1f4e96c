#pragma once

#include "mmcfrt/params.hpp"

namespace mmcfrt {

/// Onshore DC-bus chopper. Averaged (continuous duty) model.
struct EddState {
  double duty = 0;
  double instantaneous_power_w = 0;
  double cumulative_energy_j = 0;
  bool active = false;
};

/// Linear duty law between the activation threshold and the protection
/// ceiling, gated by the energy controller's enable request, with 0.005 p.u.
/// hysteresis on release.
double edd_control(double v_dc_pu, bool enable_request, EddState& state,
                   const SystemParams& params);

/// Dissipation with R_edd = V_dc_nom^2 / P_rated; instantaneous power is
/// capped at the rating, energy accumulates by P*dt.
EddState edd_step(const EddState& state, double duty, double v_dc_v,
                  double dt_s, const SystemParams& params);

}  // namespace mmcfrt
