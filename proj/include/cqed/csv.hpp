#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/scan.hpp"

namespace cqed {

/// Nine significant digits in scientific notation, '.' separator, independent of the locale.
std::string format_number(double value);

/// Header t_ns,<names...> and one row per sample, '\n' line endings.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Header <parameter>_ghz,<objective> then the samples in ascending order.
void write_scan_csv(std::ostream& out, const ScanResult& result);

/// Writes text to path in binary mode; throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

} // namespace cqed
