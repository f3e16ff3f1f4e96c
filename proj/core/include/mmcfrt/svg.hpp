#pragma once

#include <string>

#include "mmcfrt/engine.hpp"

namespace mmcfrt {

/// Six-panel figure: (a) DC-link voltage, (b) grid-side AC voltages,
/// (c) wind-side AC voltage, (d) active power, (e) MMC energy,
/// (f) energy dissipated in the EDD. Pure function of the log; regenerating
/// from the same CSV yields bit-identical output.
std::string panels_svg(const TimeSeriesLog& log);

void write_panels_svg(const TimeSeriesLog& log, const std::string& path);

}  // namespace mmcfrt
