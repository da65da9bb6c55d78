#include "sqcorr/calibration_io.hpp"

#include <charconv>
#include <string>

#include "atomic_write.hpp"
#include "sqcorr/config.hpp"
#include "sqcorr/errors.hpp"
#include "sqcorr/table.hpp"

namespace sqcorr {

void write_calibration(const SnlCalibration& cal,
                       const std::filesystem::path& path) {
  std::string out;
  out += "slope=" + format_double(cal.slope) + "\n";
  out += "en_total=" + format_double(cal.en_total) + "\n";
  out += "fit_residual=" + format_double(cal.fit_residual) + "\n";
  out += std::string("intercept_warning=") +
         (cal.intercept_warning ? "true" : "false") + "\n";
  std::string powers, vars;
  for (const auto& pt : cal.power_points) {
    if (!powers.empty()) { powers += ","; vars += ","; }
    powers += format_double(pt.lo_power);
    vars += format_double(pt.var_diff);
  }
  out += "powers=" + powers + "\n";
  out += "var_diffs=" + vars + "\n";
  detail::atomic_write(path, out);
}

namespace {

double parse_num(const std::string& key, const std::string& value) {
  double v = 0;
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), last, v);
  if (ec != std::errc() || ptr != last)
    throw FormatError(key + ": cannot parse number from '" + value + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    out.push_back(parse_num(key, v.substr(pos, comma - pos)));
    pos = comma + 1;
    if (comma == v.size()) break;
  }
  return out;
}

}  // namespace

SnlCalibration read_calibration(const std::filesystem::path& path) {
  const KeyValueList kv = parse_key_value_file(path);
  SnlCalibration cal;
  std::vector<double> powers, vars;
  bool have_slope = false;
  for (const auto& [key, value] : kv) {
    if (key == "slope") { cal.slope = parse_num(key, value); have_slope = true; }
    else if (key == "en_total") cal.en_total = parse_num(key, value);
    else if (key == "fit_residual") cal.fit_residual = parse_num(key, value);
    else if (key == "intercept_warning") cal.intercept_warning = (value == "true");
    else if (key == "powers") powers = parse_list(key, value);
    else if (key == "var_diffs") vars = parse_list(key, value);
    else throw FormatError(path.string() + ": unknown calibration key '" + key + "'");
  }
  if (!have_slope)
    throw FormatError(path.string() + ": missing required key 'slope'");
  if (powers.size() != vars.size())
    throw FormatError(path.string() + ": powers/var_diffs length mismatch");
  for (std::size_t i = 0; i < powers.size(); ++i)
    cal.power_points.push_back({powers[i], vars[i]});
  return cal;
}

}  // namespace sqcorr
