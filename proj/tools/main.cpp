// sqcorr command-line front end: simulate two-detector squeezed-light
// records, estimate squeezing from them, calibrate the shot-noise level,
// and run sweep campaigns. Exit codes: 0 success, 2 usage/config error,
// 3 I/O error, 4 data-format error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sqcorr/calibration_io.hpp"
#include "sqcorr/config.hpp"
#include "sqcorr/errors.hpp"
#include "sqcorr/estimators.hpp"
#include "sqcorr/record_io.hpp"
#include "sqcorr/simulate.hpp"
#include "sqcorr/stats.hpp"
#include "sqcorr/sweep.hpp"
#include "sqcorr/table.hpp"

namespace fs = std::filesystem;
using namespace sqcorr;

namespace {

Scenario load_scenario(const std::string& config_path,
                       const std::vector<std::string>& sets,
                       long long cli_seed) {
  KeyValueList kv = parse_key_value_file(config_path);
  for (const auto& item : sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + item + "'");
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  Scenario s = scenario_from_key_values(kv);
  s.digitizer.seed = resolve_seed(s.digitizer.seed, cli_seed);
  return s;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse list entry '" + item + "'");
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v;
  if (n == 1) { v.push_back(hi); return v; }
  for (int i = 0; i < n; ++i)
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

void print_stats(const MeasurementStats& st) {
  std::cout << "n=" << st.n << "\n"
            << "mean1=" << format_double(st.mean1) << "\n"
            << "mean2=" << format_double(st.mean2) << "\n"
            << "var1=" << format_double(st.var1) << "\n"
            << "var2=" << format_double(st.var2) << "\n"
            << "var_diff=" << format_double(st.var_diff) << "\n"
            << "cov=" << format_double(st.cov) << "\n"
            << "se_cov=" << format_double(st.se_cov) << "\n"
            << "se_var_diff=" << format_double(st.se_var_diff) << "\n"
            << "coincidence=" << format_double(coincidence_moment(st)) << "\n";
}

int cmd_simulate(const std::string& config, const std::string& out,
                 const std::vector<std::string>& sets, long long seed,
                 unsigned threads) {
  const Scenario scenario = load_scenario(config, sets, seed);
  const SampleRecord rec = simulate_record(scenario, threads);
  write_record(rec, out);
  std::cout << "wrote " << out << ": n_samples=" << scenario.digitizer.n_samples
            << " seed=" << scenario.digitizer.seed << " bytes="
            << record_file_size(scenario.digitizer.n_samples) << "\n";
  return 0;
}

int cmd_estimate(const std::string& record_path, const std::string& snl_path,
                 const std::string& method, double power_flag,
                 const std::string& csv_path) {
  const SampleRecord rec = read_record(record_path);
  const MeasurementStats st = compute_stats(rec);
  print_stats(st);

  std::optional<SqueezingEstimate> est;
  if (!method.empty()) {
    if (snl_path.empty())
      throw ConfigError("--snl calibration file required for --method " + method);
    const SnlCalibration cal = read_calibration(snl_path);
    double power = power_flag;
    if (!(power > 0.0)) {
      if (!rec.scenario)
        throw ConfigError("record has no scenario sidecar; pass --power");
      power = detected_lo_power(*rec.scenario);
    }
    if (method == "hd") est = squeezing_homodyne(st, cal, power);
    else if (method == "cov") est = squeezing_covariance(st, cal, power);
    else if (method == "lofree") est = squeezing_lo_free(st, cal.snl_at(power));
    else throw ConfigError("--method must be hd, cov or lofree");
    std::cout << "method=" << method_name(est->method) << "\n"
              << "s=" << format_double(est->s) << "\n"
              << "s_db=" << format_double(est->s_db) << "\n"
              << "s_se=" << format_double(est->se) << "\n";
  }
  if (!csv_path.empty()) write_stats_csv(st, est, csv_path);
  return 0;
}

int cmd_calibrate(const std::string& config, const std::string& powers_text,
                  const std::string& out, std::uint64_t samples,
                  double top_fraction, long long seed, unsigned threads) {
  Scenario scenario = load_scenario(config, {}, seed);
  if (samples > 0) scenario.digitizer.n_samples = samples;
  const std::vector<double> powers = parse_value_list(powers_text);
  if (powers.size() < 2)
    throw ConfigError("--powers: at least 2 LO powers required");
  const SnlCalibration cal =
      snl_calibration_campaign(scenario, powers, top_fraction, threads);
  write_calibration(cal, out);
  std::cout << "wrote " << out << ": slope=" << format_double(cal.slope)
            << " en_total=" << format_double(cal.en_total)
            << " residual=" << format_double(cal.fit_residual)
            << (cal.intercept_warning ? " (intercept warning)" : "") << "\n";
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& kind,
              const std::string& out, const std::string& values_text,
              int points, double vmin, double vmax, int seeds,
              std::uint64_t samples, const std::string& snl_path,
              const std::vector<std::string>& sets, long long seed,
              unsigned threads) {
  SweepSpec spec;
  spec.base = load_scenario(config, sets, seed);
  spec.seeds_per_point = seeds;
  spec.samples_per_run = samples;
  spec.workers = threads;

  if (kind == "phase") {
    spec.swept = SweptParam::LoPhase;
    if (!values_text.empty()) spec.values = parse_value_list(values_text);
    else {
      const int n = points > 0 ? points : 64;
      for (int i = 0; i < n; ++i)
        spec.values.push_back(2.0 * std::numbers::pi * i / n);
    }
  } else if (kind == "attenuation") {
    spec.swept = SweptParam::Transmission;
    if (!values_text.empty()) spec.values = parse_value_list(values_text);
    else spec.values = log_spaced(vmin > 0 ? vmin : 0.05,
                                  vmax > 0 ? vmax : 1.0,
                                  points > 0 ? points : 8);
  } else if (kind == "power") {
    spec.swept = SweptParam::LoPower;
    if (!values_text.empty()) spec.values = parse_value_list(values_text);
    else {
      const double base = spec.base.lo.amplitude_sq;
      spec.values = log_spaced((vmin > 0 ? vmin : 0.05) * base,
                               (vmax > 0 ? vmax : 1.0) * base,
                               points > 0 ? points : 8);
    }
  } else {
    throw ConfigError("--sweep must be phase, attenuation or power");
  }

  std::optional<SnlCalibration> cal;
  if (!snl_path.empty()) cal = read_calibration(snl_path);
  const SweepResult res = run_sweep(spec, cal ? &*cal : nullptr);

  write_sweep_csv(res, out);
  fs::path xy(out);
  xy.replace_extension(".xy");
  write_sweep_xy(res, xy);
  std::cout << "wrote " << out << " (" << res.rows.size() << " rows)";
  if (res.fit)
    std::cout << " fitted_exponent=" << format_double(res.fit->exponent);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqcorr: covariance vs. homodyne squeezing measurement toolkit"};
  app.require_subcommand(1);

  std::string config, out, record_path, snl_path, method, csv_path;
  std::string powers_text, sweep_kind, values_text;
  std::vector<std::string> sets;
  long long seed = -1;
  unsigned threads = 0;
  std::uint64_t samples = 0;
  double power_flag = 0.0, top_fraction = 0.5;
  int points = 0, seeds = 20;
  double vmin = 0.0, vmax = 0.0;

  auto* sim = app.add_subcommand("simulate", "generate a two-channel record");
  sim->add_option("config", config, "key=value scenario file")->required();
  sim->add_option("--out", out, "output record path")->required();
  sim->add_option("--set", sets, "override config entries (key=value)");
  sim->add_option("--seed", seed, "master seed (beats SQCORR_SEED and config)");
  sim->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* est = app.add_subcommand("estimate", "statistics and squeezing of a record");
  est->add_option("record", record_path, "record file")->required();
  est->add_option("--snl", snl_path, "calibration file (required for --method)");
  est->add_option("--method", method, "hd, cov or lofree");
  est->add_option("--power", power_flag, "LO power at the detectors (overrides sidecar)");
  est->add_option("--csv", csv_path, "also write machine-readable CSV");

  auto* cal = app.add_subcommand("calibrate", "measure EN and fit the shot-noise line");
  cal->add_option("config", config, "key=value scenario file")->required();
  cal->add_option("--powers", powers_text, "comma list of LO powers")->required();
  cal->add_option("--out", out, "output calibration path")->required();
  cal->add_option("--samples", samples, "samples per calibration run");
  cal->add_option("--top-fraction", top_fraction, "fraction of powers fitted (default 0.5)");
  cal->add_option("--seed", seed, "master seed");
  cal->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* swp = app.add_subcommand("sweep", "phase / attenuation / power campaign");
  swp->add_option("config", config, "key=value scenario file")->required();
  swp->add_option("--sweep", sweep_kind, "phase, attenuation or power")->required();
  swp->add_option("--out", out, "output CSV path")->required();
  swp->add_option("--values", values_text, "explicit comma list of grid values");
  swp->add_option("--points", points, "grid size (default 64 phase / 8 otherwise)");
  swp->add_option("--min", vmin, "grid minimum (attenuation/power)");
  swp->add_option("--max", vmax, "grid maximum (attenuation/power)");
  swp->add_option("--seeds", seeds, "runs per grid point (default 20)");
  swp->add_option("--samples", samples, "samples per run (default 100000)");
  swp->add_option("--snl", snl_path, "calibration file (default: ideal slope)");
  swp->add_option("--set", sets, "override config entries (key=value)");
  swp->add_option("--seed", seed, "master seed");
  swp->add_option("--threads", threads, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(config, out, sets, seed, threads);
    if (est->parsed())
      return cmd_estimate(record_path, snl_path, method, power_flag, csv_path);
    if (cal->parsed())
      return cmd_calibrate(config, powers_text, out, samples, top_fraction,
                           seed, threads);
    if (swp->parsed())
      return cmd_sweep(config, sweep_kind, out, values_text, points, vmin,
                       vmax, seeds, samples == 0 ? 100000 : samples, snl_path,
                       sets, seed, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
