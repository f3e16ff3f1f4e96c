#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mmcfrt/engine.hpp"

namespace mmcfrt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  int line;
};

/// Parses a sectioned key=value scenario document. Every key must map to
/// exactly one documented parameter; unknown sections or keys reject with
/// a line number. Missing keys keep their defaults.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);

/// Applies a "section.key=value" override on top of a parsed scenario.
void apply_override(Scenario& sc, const std::string& assignment);

/// Canonical serialization: every documented key, fixed order, full
/// precision. parse(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& sc);

}  // namespace mmcfrt
