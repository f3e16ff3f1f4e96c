#pragma once

#include <string>

#include "mmcfrt/engine.hpp"

namespace mmcfrt {

/// Fixed column set and order; stable across versions of the same scenario
/// schema.
std::string timeseries_csv(const TimeSeriesLog& log);
void write_timeseries_csv(const TimeSeriesLog& log, const std::string& path);

/// Parses a CSV previously produced by timeseries_csv (used by the plot
/// regeneration path).
TimeSeriesLog read_timeseries_csv(const std::string& path);

std::string budget_report(const EnergyBudget& b, const RunResult& r);

}  // namespace mmcfrt
