#pragma once

#include <array>
#include <cmath>

namespace mmcfrt {

struct DqPair {
  double d = 0;
  double q = 0;
};

/// Amplitude-invariant Clarke + Park: abc -> dq at angle theta.
inline DqPair abc_to_dq(const std::array<double, 3>& abc, double theta) {
  const double two_thirds = 2.0 / 3.0;
  const double alpha =
      two_thirds * (abc[0] - 0.5 * abc[1] - 0.5 * abc[2]);
  const double beta =
      two_thirds * (std::sqrt(3.0) / 2.0) * (abc[1] - abc[2]);
  const double c = std::cos(theta), s = std::sin(theta);
  return {alpha * c + beta * s, -alpha * s + beta * c};
}

inline std::array<double, 3> dq_to_abc(const DqPair& dq, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double alpha = dq.d * c - dq.q * s;
  const double beta = dq.d * s + dq.q * c;
  return {alpha, -0.5 * alpha + (std::sqrt(3.0) / 2.0) * beta,
          -0.5 * alpha - (std::sqrt(3.0) / 2.0) * beta};
}

inline double wrap_angle(double theta) {
  const double two_pi = 6.283185307179586476925286766559;
  theta = std::fmod(theta, two_pi);
  if (theta < 0) theta += two_pi;
  return theta;
}

}  // namespace mmcfrt
