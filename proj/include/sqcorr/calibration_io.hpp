#pragma once
#include <filesystem>

#include "sqcorr/estimators.hpp"

namespace sqcorr {

/// Store a calibration as key=value lines (slope, en_total, fit_residual,
/// intercept_warning, powers, var_diffs). 17-significant-digit rendering
/// makes reparsing reproduce the exact values.
void write_calibration(const SnlCalibration& cal,
                       const std::filesystem::path& path);

SnlCalibration read_calibration(const std::filesystem::path& path);

}  // namespace sqcorr
