#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqcorr/estimators.hpp"
#include "sqcorr/scenario.hpp"

namespace sqcorr {

enum class SweptParam { LoPhase, Transmission, LoPower };

const char* swept_param_name(SweptParam p);

/// One measurement campaign: sweep one parameter of a base scenario over a
/// value grid, several independently seeded runs per point. The base
/// scenario's digitizer seed is the campaign master seed; run seeds are
/// derived from (master, point index, seed index), so a fixed spec
/// reproduces byte-identical tables for any worker count.
struct SweepSpec {
  Scenario base;
  SweptParam swept = SweptParam::LoPhase;
  std::vector<double> values;
  int seeds_per_point = 20;
  std::uint64_t samples_per_run = 100000;
  unsigned workers = 0;  ///< forwarded to simulate_record; 0 = auto
};

/// Seed-averaged estimates at one swept value. Standard errors combine the
/// per-run Gaussian-theory errors: se = sqrt(sum se_i^2) / k.
struct SweepRow {
  double value = 0;
  double cov = 0, cov_se = 0;
  double var_diff = 0, var_diff_se = 0;
  double s_cov = 0, s_cov_se = 0;
  double s_hd = 0, s_hd_se = 0;
  std::string witness;  ///< squeezed / antisqueezed / inconclusive at 5 se
};

struct SweepResult {
  SweepSpec spec;
  std::uint64_t master_seed = 0;
  SnlCalibration snl;
  std::vector<SweepRow> rows;
  std::optional<PowerLawFit> fit;  ///< attenuation sweeps only
  std::string fit_note;            ///< reason when the fit was refused
};

/// Exact calibration implied by the scenario parameters: slope
/// 2 (eta1 + eta2) per unit configured power (= 4 for ideal detectors),
/// en_total = en1 + en2. Used when no measured calibration is supplied.
SnlCalibration ideal_calibration(const Scenario& s);

/// Covariance and squeezing estimates versus LO phase. Positive-covariance
/// rows witness the squeezed quadrature, negative rows the antisqueezed one.
SweepResult run_phase_sweep(const SweepSpec& spec,
                            const SnlCalibration* snl = nullptr);

/// Covariance versus transmission, plus the fitted log-log scaling exponent
/// of the covariance column: 1 for LO-only attenuation, 2 for joint
/// attenuation. The fit is refused (fit empty, fit_note set) when the
/// covariances mix signs or vanish.
SweepResult run_attenuation_sweep(const SweepSpec& spec,
                                  const SnlCalibration* snl = nullptr);

/// Generic driver behind the two above; also handles swept = LoPower.
SweepResult run_sweep(const SweepSpec& spec,
                      const SnlCalibration* snl = nullptr);

/// Homodyne-versus-covariance comparison along a transmission or LO-power
/// sweep: s_cov tracks the true (loss-degraded) quadrature variance while
/// s_hd picks up the additive bias en_total / V_SNL as the light gets dim.
struct ComparisonRow {
  double value = 0;
  double cov = 0, cov_se = 0;
  double s_cov = 0, s_cov_se = 0;
  double s_hd = 0, s_hd_se = 0;
  double s_true = 0;     ///< model quadrature variance after loss/efficiency
  double s_hd_pred = 0;  ///< s_true + en_total / V_SNL(P): the bias law
};

struct ComparisonReport {
  SweepSpec spec;
  std::uint64_t master_seed = 0;
  SnlCalibration snl;
  std::vector<ComparisonRow> rows;
};

ComparisonReport run_comparison(const SweepSpec& spec,
                                const SnlCalibration& snl);

/// Full shot-noise calibration procedure: a zero-light run (all inputs
/// blocked) measures en1 + en2, vacuum-signal runs at each listed power
/// measure the contaminated SNL, and the top `top_fraction` of the power
/// range (at least 2 points) is fitted through the origin. The resulting
/// line is valid at every power by linearity. Powers must be ascending,
/// >= 2 values; runs use the scenario's digitizer length and master seed.
SnlCalibration snl_calibration_campaign(const Scenario& scenario,
                                        const std::vector<double>& powers,
                                        double top_fraction = 0.5,
                                        unsigned workers = 0);

}  // namespace sqcorr
