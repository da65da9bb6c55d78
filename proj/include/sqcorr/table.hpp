#pragma once
#include <filesystem>
#include <optional>
#include <string>

#include "sqcorr/estimators.hpp"
#include "sqcorr/sweep.hpp"

namespace sqcorr {

/// Locale-independent rendering with 17 significant digits, enough to
/// round-trip any double exactly through text.
std::string format_double(double v);

/// Sweep table as UTF-8 CSV: '#'-prefixed provenance comments (spec,
/// scenario, master seed, fitted exponent when present), then a header row
/// and one row per swept value. Deterministic bytes for a fixed spec.
void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& path);

/// Plot-ready companion: whitespace-separated "value cov cov_se" lines.
void write_sweep_xy(const SweepResult& result,
                    const std::filesystem::path& path);

void write_comparison_csv(const ComparisonReport& report,
                          const std::filesystem::path& path);

/// Single-row CSV of record statistics plus an optional squeezing estimate.
void write_stats_csv(const MeasurementStats& stats,
                     const std::optional<SqueezingEstimate>& estimate,
                     const std::filesystem::path& path);

}  // namespace sqcorr
