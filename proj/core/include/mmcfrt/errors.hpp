#pragma once

#include <stdexcept>
#include <string>

namespace mmcfrt {

/// Raised when a hard protection assertion trips (capacitor overvoltage,
/// DC ceiling, capacitor depletion). Aborts the run.
class ProtectionError : public std::runtime_error {
 public:
  ProtectionError(std::string what, double t_s)
      : std::runtime_error(std::move(what)), t_s(t_s) {}
  double t_s;
};

}  // namespace mmcfrt
