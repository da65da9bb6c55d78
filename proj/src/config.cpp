#include "sqcorr/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sqcorr/errors.hpp"
#include "sqcorr/table.hpp"

namespace sqcorr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key + ": cannot parse number from '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key + ": cannot parse unsigned integer from '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

LossMode parse_mode(const std::string& key, const std::string& value) {
  if (value == "signal_only") return LossMode::SignalOnly;
  if (value == "lo_only") return LossMode::LoOnly;
  if (value == "both") return LossMode::Both;
  throw ConfigError(key + ": expected signal_only/lo_only/both, got '" + value + "'");
}

const char* mode_name(LossMode m) {
  switch (m) {
    case LossMode::SignalOnly: return "signal_only";
    case LossMode::LoOnly: return "lo_only";
    case LossMode::Both: return "both";
  }
  return "both";
}

Preset parse_preset(const std::string& key, const std::string& value) {
  if (value == "opa") return Preset::Opa;
  if (value == "kerr") return Preset::Kerr;
  if (value == "custom") return Preset::Custom;
  throw ConfigError(key + ": expected opa/kerr/custom, got '" + value + "'");
}

}  // namespace

KeyValueList parse_key_value_text(const std::string& text,
                                  const std::string& origin) {
  KeyValueList kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw FormatError(origin + ":" + std::to_string(lineno) +
                        ": expected key=value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw FormatError(origin + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, value);
  }
  return kv;
}

KeyValueList parse_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str(), path.string());
}

Scenario scenario_from_key_values(const KeyValueList& kv) {
  Scenario s;
  Preset declared = Preset::Custom;
  for (const auto& [key, value] : kv) {
    if (key == "preset") {
      declared = parse_preset(key, value);
      s = preset_scenario(declared);
    }
  }

  bool mode_overridden = false;
  for (const auto& [key, value] : kv) {
    if (key == "preset") continue;  // applied above, overrides win below
    if (key == "state.vx") s.state.vx = parse_double(key, value);
    else if (key == "state.vy") s.state.vy = parse_double(key, value);
    else if (key == "lo.amplitude_sq") s.lo.amplitude_sq = parse_double(key, value);
    else if (key == "lo.phase_rad") s.lo.phase_rad = parse_double(key, value);
    else if (key == "lo.v_lo") s.lo.v_lo = parse_double(key, value);
    else if (key == "loss.transmission") s.loss.transmission = parse_double(key, value);
    else if (key == "loss.mode") { s.loss.mode = parse_mode(key, value); mode_overridden = true; }
    else if (key == "det1.efficiency") s.det1.efficiency = parse_double(key, value);
    else if (key == "det1.en_variance") s.det1.en_variance = parse_double(key, value);
    else if (key == "det1.label") s.det1.label = value;
    else if (key == "det2.efficiency") s.det2.efficiency = parse_double(key, value);
    else if (key == "det2.en_variance") s.det2.en_variance = parse_double(key, value);
    else if (key == "det2.label") s.det2.label = value;
    else if (key == "digitizer.sample_rate") s.digitizer.sample_rate = parse_double(key, value);
    else if (key == "digitizer.bandwidth") s.digitizer.bandwidth = parse_double(key, value);
    else if (key == "digitizer.n_samples") s.digitizer.n_samples = parse_u64(key, value);
    else if (key == "digitizer.seed") s.digitizer.seed = parse_u64(key, value);
    else if (key == "digitizer.ac_coupled") s.digitizer.ac_coupled = parse_bool(key, value);
    else if (key == "scenario") continue;  // sidecar marker
    else throw ConfigError(key + ": unknown configuration key");
  }

  // Changing the attenuation arrangement leaves the preset family.
  if (mode_overridden &&
      ((declared == Preset::Opa && s.loss.mode != LossMode::LoOnly) ||
       (declared == Preset::Kerr && s.loss.mode != LossMode::Both)))
    s.preset = Preset::Custom;

  validate(s);
  return s;
}

KeyValueList scenario_to_key_values(const Scenario& s) {
  KeyValueList kv;
  kv.emplace_back("preset", preset_name(s.preset));
  kv.emplace_back("state.vx", format_double(s.state.vx));
  kv.emplace_back("state.vy", format_double(s.state.vy));
  kv.emplace_back("lo.amplitude_sq", format_double(s.lo.amplitude_sq));
  kv.emplace_back("lo.phase_rad", format_double(s.lo.phase_rad));
  kv.emplace_back("lo.v_lo", format_double(s.lo.v_lo));
  kv.emplace_back("loss.transmission", format_double(s.loss.transmission));
  kv.emplace_back("loss.mode", mode_name(s.loss.mode));
  kv.emplace_back("det1.efficiency", format_double(s.det1.efficiency));
  kv.emplace_back("det1.en_variance", format_double(s.det1.en_variance));
  kv.emplace_back("det1.label", s.det1.label);
  kv.emplace_back("det2.efficiency", format_double(s.det2.efficiency));
  kv.emplace_back("det2.en_variance", format_double(s.det2.en_variance));
  kv.emplace_back("det2.label", s.det2.label);
  kv.emplace_back("digitizer.sample_rate", format_double(s.digitizer.sample_rate));
  kv.emplace_back("digitizer.bandwidth", format_double(s.digitizer.bandwidth));
  kv.emplace_back("digitizer.n_samples", std::to_string(s.digitizer.n_samples));
  kv.emplace_back("digitizer.seed", std::to_string(s.digitizer.seed));
  kv.emplace_back("digitizer.ac_coupled", s.digitizer.ac_coupled ? "true" : "false");
  return kv;
}

std::uint64_t resolve_seed(std::uint64_t config_seed, long long cli_seed) {
  if (cli_seed >= 0) return static_cast<std::uint64_t>(cli_seed);
  if (const char* env = std::getenv("SQCORR_SEED")) {
    const std::string value(env);
    return parse_u64("SQCORR_SEED", value);
  }
  return config_seed;
}

}  // namespace sqcorr
