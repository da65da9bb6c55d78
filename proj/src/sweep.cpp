#include "sqcorr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqcorr/errors.hpp"
#include "sqcorr/rng.hpp"
#include "sqcorr/simulate.hpp"

namespace sqcorr {

const char* swept_param_name(SweptParam p) {
  switch (p) {
    case SweptParam::LoPhase: return "phase_rad";
    case SweptParam::Transmission: return "transmission";
    case SweptParam::LoPower: return "lo_power";
  }
  return "value";
}

SnlCalibration ideal_calibration(const Scenario& s) {
  SnlCalibration cal;
  cal.slope = 2.0 * (s.det1.efficiency + s.det2.efficiency);
  cal.en_total = s.det1.en_variance + s.det2.en_variance;
  return cal;
}

namespace {

Scenario scenario_at(const SweepSpec& spec, double value,
                     std::size_t point_idx, int seed_idx) {
  Scenario s = spec.base;
  switch (spec.swept) {
    case SweptParam::LoPhase: s.lo.phase_rad = value; break;
    case SweptParam::Transmission: s.loss.transmission = value; break;
    case SweptParam::LoPower: s.lo.amplitude_sq = value; break;
  }
  s.digitizer.n_samples = spec.samples_per_run;
  s.digitizer.seed = rng::derive_seed(spec.base.digitizer.seed, point_idx,
                                      static_cast<std::uint64_t>(seed_idx) + 1);
  return s;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.values.empty())
    throw ConfigError("sweep: value grid must not be empty");
  if (spec.seeds_per_point < 1)
    throw ConfigError("sweep: seeds_per_point must be >= 1");
  if (spec.samples_per_run < 2)
    throw ConfigError("sweep: samples_per_run must be >= 2");
  for (double v : spec.values) {
    if (spec.swept == SweptParam::Transmission && !(v > 0.0 && v <= 1.0))
      throw ConfigError("sweep: transmissions must lie in (0, 1]");
    if (spec.swept == SweptParam::LoPower && !(v >= 0.0))
      throw ConfigError("sweep: LO powers must be >= 0");
    if (!std::isfinite(v)) throw ConfigError("sweep: non-finite grid value");
  }
}

struct PointAverage {
  MeasurementStats mean;   // cov/var_diff are seed means, se combined
  Scenario representative;
};

PointAverage average_point(const SweepSpec& spec, double value,
                           std::size_t point_idx) {
  const int k = spec.seeds_per_point;
  double cov = 0, vd = 0, se_cov_sq = 0, se_vd_sq = 0;
  Scenario scn;
  for (int j = 0; j < k; ++j) {
    scn = scenario_at(spec, value, point_idx, j);
    const MeasurementStats st = compute_stats(simulate_record(scn, spec.workers));
    cov += st.cov;
    vd += st.var_diff;
    se_cov_sq += st.se_cov * st.se_cov;
    se_vd_sq += st.se_var_diff * st.se_var_diff;
  }
  PointAverage avg;
  avg.mean.n = spec.samples_per_run * static_cast<std::uint64_t>(k);
  avg.mean.cov = cov / k;
  avg.mean.var_diff = vd / k;
  avg.mean.se_cov = std::sqrt(se_cov_sq) / k;
  avg.mean.se_var_diff = std::sqrt(se_vd_sq) / k;
  avg.representative = scn;
  return avg;
}

std::string witness_label(double cov, double se) {
  if (cov > 5.0 * se) return "squeezed";
  if (cov < -5.0 * se) return "antisqueezed";
  return "inconclusive";
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SnlCalibration* snl) {
  validate_spec(spec);
  validate(spec.base);
  const SnlCalibration cal = snl ? *snl : ideal_calibration(spec.base);

  SweepResult res;
  res.spec = spec;
  res.master_seed = spec.base.digitizer.seed;
  res.snl = cal;
  res.rows.reserve(spec.values.size());

  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double value = spec.values[i];
    const PointAverage avg = average_point(spec, value, i);
    const double power = detected_lo_power(avg.representative);

    SweepRow row;
    row.value = value;
    row.cov = avg.mean.cov;
    row.cov_se = avg.mean.se_cov;
    row.var_diff = avg.mean.var_diff;
    row.var_diff_se = avg.mean.se_var_diff;
    const auto sc = squeezing_covariance(row.cov, row.cov_se, cal, power);
    const auto sh = squeezing_homodyne(row.var_diff, row.var_diff_se, cal, power);
    row.s_cov = sc.s;
    row.s_cov_se = sc.se;
    row.s_hd = sh.s;
    row.s_hd_se = sh.se;
    row.witness = witness_label(row.cov, row.cov_se);
    res.rows.push_back(row);
  }

  if (spec.swept == SweptParam::Transmission) {
    std::vector<CovPoint> pts;
    pts.reserve(res.rows.size());
    for (const auto& r : res.rows) pts.push_back({r.value, r.cov});
    try {
      res.fit = fit_scaling_exponent(pts);
    } catch (const ConfigError& e) {
      res.fit_note = e.what();
    }
  }
  return res;
}

SweepResult run_phase_sweep(const SweepSpec& spec, const SnlCalibration* snl) {
  if (spec.swept != SweptParam::LoPhase)
    throw ConfigError("run_phase_sweep: spec.swept must be LoPhase");
  return run_sweep(spec, snl);
}

SweepResult run_attenuation_sweep(const SweepSpec& spec,
                                  const SnlCalibration* snl) {
  if (spec.swept != SweptParam::Transmission)
    throw ConfigError("run_attenuation_sweep: spec.swept must be Transmission");
  return run_sweep(spec, snl);
}

ComparisonReport run_comparison(const SweepSpec& spec,
                                const SnlCalibration& snl) {
  if (spec.swept == SweptParam::LoPhase)
    throw ConfigError("run_comparison: sweep transmission or LO power, not phase");
  const SweepResult base = run_sweep(spec, &snl);

  ComparisonReport rep;
  rep.spec = spec;
  rep.master_seed = base.master_seed;
  rep.snl = snl;
  rep.rows.reserve(base.rows.size());

  for (std::size_t i = 0; i < base.rows.size(); ++i) {
    const SweepRow& r = base.rows[i];
    Scenario scn = spec.base;
    if (spec.swept == SweptParam::Transmission)
      scn.loss.transmission = r.value;
    else
      scn.lo.amplitude_sq = r.value;
    const double power = detected_lo_power(scn);

    ComparisonRow row;
    row.value = r.value;
    row.cov = r.cov;
    row.cov_se = r.cov_se;
    row.s_cov = r.s_cov;
    row.s_cov_se = r.s_cov_se;
    row.s_hd = r.s_hd;
    row.s_hd_se = r.s_hd_se;
    // Model truth, independent of the measured calibration.
    const SnlCalibration ideal = ideal_calibration(scn);
    row.s_true = 1.0 - 4.0 * expected_covariance(scn) / ideal.snl_at(power);
    row.s_hd_pred = row.s_true + snl.en_total / snl.snl_at(power);
    rep.rows.push_back(row);
  }
  return rep;
}

SnlCalibration snl_calibration_campaign(const Scenario& scenario,
                                        const std::vector<double>& powers,
                                        double top_fraction, unsigned workers) {
  if (powers.size() < 2)
    throw ConfigError("calibration campaign: at least 2 powers required");
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0.0))
      throw ConfigError("calibration campaign: powers must be > 0");
    if (i > 0 && powers[i] <= powers[i - 1])
      throw ConfigError("calibration campaign: powers must be strictly ascending");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0))
    throw ConfigError("calibration campaign: top_fraction must lie in (0, 1]");

  const std::uint64_t master = scenario.digitizer.seed;

  // Zero-light run: all inputs blocked, only electronic noise remains.
  Scenario dark = scenario;
  dark.preset = Preset::Custom;
  dark.state = vacuum_state();
  dark.lo.amplitude_sq = 0.0;
  dark.loss = {1.0, LossMode::Both};
  dark.digitizer.seed = rng::derive_seed(master, 0xDA12Cull, 0);
  const double en_total =
      compute_stats(simulate_record(dark, workers)).var_diff;

  // Vacuum-signal runs across the power list.
  std::vector<PowerPoint> all;
  all.reserve(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    Scenario vac = dark;
    vac.lo.amplitude_sq = powers[i];
    vac.digitizer.seed = rng::derive_seed(master, 0xCA11Bull, i + 1);
    all.push_back({powers[i], compute_stats(simulate_record(vac, workers)).var_diff});
  }

  // Calibrate on the high-power region where EN is relatively negligible.
  std::size_t take = static_cast<std::size_t>(
      std::ceil(top_fraction * static_cast<double>(all.size())));
  take = std::max<std::size_t>(2, std::min(take, all.size()));
  const std::vector<PowerPoint> top(all.end() - static_cast<std::ptrdiff_t>(take),
                                    all.end());
  return calibrate_snl(top, en_total);
}

}  // namespace sqcorr
