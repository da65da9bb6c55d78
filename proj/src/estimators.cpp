#include "sqcorr/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sqcorr/errors.hpp"

namespace sqcorr {

const char* method_name(Method m) {
  switch (m) {
    case Method::HomodyneDiff: return "hd";
    case Method::Covariance: return "cov";
    case Method::LoFree: return "lofree";
  }
  return "cov";
}

SnlCalibration calibrate_snl(const std::vector<PowerPoint>& points,
                             double en_total) {
  if (points.empty())
    throw ConfigError("calibration: at least one (power, var_diff) point required");
  if (!(en_total >= 0.0))
    throw ConfigError("calibration: en_total must be >= 0");

  double sum_p2 = 0.0, sum_py = 0.0, mean_p = 0.0;
  for (const auto& pt : points) {
    if (!(pt.lo_power > 0.0))
      throw ConfigError("calibration: all LO powers must be > 0");
    const double y = pt.var_diff - en_total;
    if (y < 0.0)
      throw ConfigError(
          "calibration: EN-corrected variance negative at power " +
          std::to_string(pt.lo_power) + "; en_total looks miscalibrated");
    sum_p2 += pt.lo_power * pt.lo_power;
    sum_py += pt.lo_power * y;
    mean_p += pt.lo_power;
  }
  mean_p /= static_cast<double>(points.size());

  SnlCalibration cal;
  cal.slope = sum_py / sum_p2;
  cal.en_total = en_total;
  cal.power_points = points;

  double ss = 0.0;
  for (const auto& pt : points) {
    const double r = (pt.var_diff - en_total) - cal.slope * pt.lo_power;
    ss += r * r;
  }
  cal.fit_residual = std::sqrt(ss / static_cast<double>(points.size()));

  if (points.size() >= 3) {
    // The shot-noise line passes through the origin, so a large fitted
    // free-line intercept flags a contaminated calibration.
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
    for (const auto& pt : points) {
      const double y = pt.var_diff - en_total;
      m(0, 0) += 1.0;
      m(0, 1) += pt.lo_power;
      m(1, 1) += pt.lo_power * pt.lo_power;
      rhs(0) += y;
      rhs(1) += pt.lo_power * y;
    }
    m(1, 0) = m(0, 1);
    const Eigen::Vector2d ab = m.ldlt().solve(rhs);
    cal.intercept_warning = std::abs(ab(0)) > 0.02 * cal.slope * mean_p;
  }
  return cal;
}

namespace {

double to_db(double s) {
  return s > 0.0 ? 10.0 * std::log10(s)
                 : std::numeric_limits<double>::quiet_NaN();
}

double checked_snl(const SnlCalibration& snl, double lo_power) {
  if (!(lo_power > 0.0))
    throw ConfigError("squeezing estimate: lo_power must be > 0");
  const double v = snl.snl_at(lo_power);
  if (!(v > 0.0))
    throw ConfigError("squeezing estimate: nonpositive shot-noise level");
  return v;
}

}  // namespace

SqueezingEstimate squeezing_homodyne(double var_diff, double se_var_diff,
                                     const SnlCalibration& snl,
                                     double lo_power) {
  const double v_snl = checked_snl(snl, lo_power);
  SqueezingEstimate est;
  est.method = Method::HomodyneDiff;
  est.s = var_diff / v_snl;
  est.s_db = to_db(est.s);
  est.se = se_var_diff / v_snl;
  return est;
}

SqueezingEstimate squeezing_homodyne_en_corrected(double var_diff,
                                                  double se_var_diff,
                                                  const SnlCalibration& snl,
                                                  double lo_power) {
  const double v_snl = checked_snl(snl, lo_power);
  SqueezingEstimate est;
  est.method = Method::HomodyneDiff;
  est.s = (var_diff - snl.en_total) / v_snl;
  est.s_db = to_db(est.s);
  est.se = se_var_diff / v_snl;
  return est;
}

SqueezingEstimate squeezing_covariance(double cov, double se_cov,
                                       const SnlCalibration& snl,
                                       double lo_power) {
  const double v_snl = checked_snl(snl, lo_power);
  SqueezingEstimate est;
  est.method = Method::Covariance;
  est.s = 1.0 - 4.0 * cov / v_snl;
  est.s_db = to_db(est.s);
  est.se = 4.0 * se_cov / v_snl;
  return est;
}

SqueezingEstimate squeezing_lo_free(double cov, double se_cov,
                                    double snl_equivalent) {
  if (!(snl_equivalent > 0.0))
    throw ConfigError("squeezing estimate: snl_equivalent must be > 0");
  SqueezingEstimate est;
  est.method = Method::LoFree;
  est.s = 4.0 * cov / snl_equivalent + 1.0;
  est.s_db = to_db(est.s);
  est.se = 4.0 * se_cov / snl_equivalent;
  return est;
}

SqueezingEstimate squeezing_homodyne(const MeasurementStats& st,
                                     const SnlCalibration& snl,
                                     double lo_power) {
  return squeezing_homodyne(st.var_diff, st.se_var_diff, snl, lo_power);
}

SqueezingEstimate squeezing_covariance(const MeasurementStats& st,
                                       const SnlCalibration& snl,
                                       double lo_power) {
  return squeezing_covariance(st.cov, st.se_cov, snl, lo_power);
}

SqueezingEstimate squeezing_lo_free(const MeasurementStats& st,
                                    double snl_equivalent) {
  return squeezing_lo_free(st.cov, st.se_cov, snl_equivalent);
}

PowerLawFit fit_scaling_exponent(const std::vector<CovPoint>& points) {
  if (points.size() < 3)
    throw ConfigError("scaling fit: at least 3 (T, cov) points required");
  const double sign0 = points.front().cov;
  for (const auto& pt : points) {
    if (!(pt.transmission > 0.0))
      throw ConfigError("scaling fit: all transmissions must be > 0");
    if (pt.cov == 0.0 || (pt.cov > 0.0) != (sign0 > 0.0))
      throw ConfigError(
          "scaling fit: covariances must share one nonzero sign; "
          "exponent undefined");
  }

  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : points) {
    const double x = std::log(pt.transmission);
    const double y = std::log(std::abs(pt.cov));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double sxx_c = sxx - sx * sx / n;
  const double sxy_c = sxy - sx * sy / n;
  if (!(sxx_c > 1e-12 * std::max(1.0, sxx)))
    throw ConfigError("scaling fit: transmissions must not all coincide");

  PowerLawFit fit;
  fit.exponent = sxy_c / sxx_c;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.amplitude = std::copysign(std::exp(intercept), sign0);

  double ss = 0.0;
  for (const auto& pt : points) {
    const double r = std::log(std::abs(pt.cov)) - intercept -
                     fit.exponent * std::log(pt.transmission);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  const double dof = n > 2 ? n - 2 : 1.0;
  fit.exponent_se = std::sqrt(ss / dof / sxx_c);
  return fit;
}

}  // namespace sqcorr
