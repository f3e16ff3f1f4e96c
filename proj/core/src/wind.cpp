#include "mmcfrt/wind.hpp"

#include <algorithm>

namespace mmcfrt {

double wind_power(double t, double fault_onset, double cleared_at,
                  const WindProfile& profile) {
  const double rated = profile.rated_power_w;
  if (!profile.curtailment_enabled || fault_onset < 0) return rated;

  const double curtail_start = fault_onset + profile.comm_delay_s;
  const double recovery_start = cleared_at + profile.comm_delay_s;

  auto curtailed = [&](double tt) {
    if (tt <= curtail_start) return rated;
    if (profile.rampdown_s <= 0) return 0.0;
    const double f = 1.0 - (tt - curtail_start) / profile.rampdown_s;
    return rated * std::clamp(f, 0.0, 1.0);
  };

  if (t < curtail_start) return rated;
  if (t < recovery_start) return curtailed(t);
  if (profile.recovery_s <= 0) return rated;
  const double p0 = curtailed(recovery_start);
  return std::min(rated, p0 + rated * (t - recovery_start) / profile.recovery_s);
}

}  // namespace mmcfrt
