#pragma once
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sqcorr/scenario.hpp"

namespace sqcorr {

using KeyValueList = std::vector<std::pair<std::string, std::string>>;

/// Parse UTF-8 "key=value" lines; '#' starts a comment, blank lines are
/// skipped. Order is preserved (later assignments win).
/// Throws IoError when unreadable, FormatError on a malformed line.
KeyValueList parse_key_value_file(const std::filesystem::path& path);
KeyValueList parse_key_value_text(const std::string& text,
                                  const std::string& origin = "<string>");

/// Build a scenario from dotted keys (state.vx, lo.amplitude_sq,
/// loss.mode, det1.en_variance, digitizer.seed, preset, ...). The preset
/// key is applied first, remaining keys override it. An override of
/// loss.mode that breaks a preset's attenuation arrangement reclassifies
/// the scenario as custom. Unknown keys are rejected by name.
/// Throws ConfigError naming the offending key.
Scenario scenario_from_key_values(const KeyValueList& kv);

/// Canonical key=value serialization of a scenario (sidecar / provenance).
/// Deterministic field order; round-trips exactly through
/// scenario_from_key_values thanks to 17-significant-digit rendering.
KeyValueList scenario_to_key_values(const Scenario& s);

/// Resolve the effective master seed with documented precedence:
/// CLI flag > SQCORR_SEED environment variable > config value.
/// cli_seed < 0 means "no flag given". Throws ConfigError when the
/// environment variable is set but unparseable.
std::uint64_t resolve_seed(std::uint64_t config_seed, long long cli_seed);

}  // namespace sqcorr
