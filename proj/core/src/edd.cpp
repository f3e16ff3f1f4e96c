#include "mmcfrt/edd.hpp"

#include <algorithm>

namespace mmcfrt {

double edd_control(double v_dc_pu, bool enable_request, EddState& state,
                   const SystemParams& params) {
  const double on = params.edd_activation_pu;
  const double full = params.dc_overvoltage_limit_pu;
  const double hysteresis = 0.005;

  if (state.active) {
    if (!enable_request || v_dc_pu < on - hysteresis) state.active = false;
  } else {
    if (enable_request && v_dc_pu > on) state.active = true;
  }
  if (!state.active) return 0.0;
  return std::clamp((v_dc_pu - on) / (full - on), 0.0, 1.0);
}

EddState edd_step(const EddState& state, double duty, double v_dc_v,
                  double dt_s, const SystemParams& params) {
  const double r_edd =
      params.dc_voltage_v * params.dc_voltage_v / params.edd_rated_power_w;
  EddState next = state;
  next.duty = duty;
  next.instantaneous_power_w =
      std::min(duty * v_dc_v * v_dc_v / r_edd, params.edd_rated_power_w);
  next.cumulative_energy_j += next.instantaneous_power_w * dt_s;
  return next;
}

}  // namespace mmcfrt
