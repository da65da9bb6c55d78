#pragma once
#include <cmath>
#include <vector>

#include "sqcorr/stats.hpp"

namespace sqcorr {

/// One shot-noise calibration point: difference-current variance measured
/// with vacuum signal at a known LO power (configured amplitude_sq units).
struct PowerPoint {
  double lo_power = 0;
  double var_diff = 0;
};

/// Shot-noise-level calibration: V_SNL(P) = slope * P after subtracting the
/// independently measured electronic noise. With the shot-noise-unit
/// convention and unit-efficiency detectors the slope is 4.
struct SnlCalibration {
  double slope = 4.0;
  double en_total = 0.0;      ///< measured en1 + en2
  double fit_residual = 0.0;  ///< rms of EN-corrected points about the fit
  bool intercept_warning = false;  ///< free-line intercept beyond tolerance
  std::vector<PowerPoint> power_points;  ///< raw points used in the fit

  double snl_at(double lo_power) const { return slope * lo_power; }
};

/// Least-squares line through the origin on EN-corrected variances.
/// A free-line intercept larger than 2% of slope*mean(P) (3+ points only)
/// sets intercept_warning. Throws ConfigError on no points, nonpositive
/// powers, or a negative EN-corrected variance (miscalibrated en_total).
SnlCalibration calibrate_snl(const std::vector<PowerPoint>& points,
                             double en_total);

enum class Method { HomodyneDiff, Covariance, LoFree };

const char* method_name(Method m);

/// Estimated quadrature variance in shot-noise units: s < 1 means squeezing.
struct SqueezingEstimate {
  double s = 1.0;
  double s_db = 0.0;  ///< 10 log10(s); NaN when s <= 0
  double se = 0.0;
  Method method = Method::Covariance;
};

/// Standard homodyne estimate s = var_diff / V_SNL(P). Deliberately performs
/// no EN subtraction, so it carries the additive bias en_total / V_SNL(P).
SqueezingEstimate squeezing_homodyne(double var_diff, double se_var_diff,
                                     const SnlCalibration& snl,
                                     double lo_power);

/// EN-corrected homodyne variant; not part of the headline comparison.
SqueezingEstimate squeezing_homodyne_en_corrected(double var_diff,
                                                  double se_var_diff,
                                                  const SnlCalibration& snl,
                                                  double lo_power);

/// Covariance estimate s = 1 - 4 cov / V_SNL(P); immune to electronic noise
/// in the ensemble average since the two detectors' EN are uncorrelated.
SqueezingEstimate squeezing_covariance(double cov, double se_cov,
                                       const SnlCalibration& snl,
                                       double lo_power);

/// LO-free estimate for a dim squeezed beam split directly on a 50/50
/// beamsplitter: s = 4 cov / V_SNL + 1. In this arrangement the correlation
/// signs swap (squeezing gives cov < 0, zero covariance is shot-noise
/// limited), and the beam's own difference-current variance supplies
/// snl_equivalent = 4 a2.
SqueezingEstimate squeezing_lo_free(double cov, double se_cov,
                                    double snl_equivalent);

/// Convenience overloads pulling the inputs out of MeasurementStats.
SqueezingEstimate squeezing_homodyne(const MeasurementStats& st,
                                     const SnlCalibration& snl,
                                     double lo_power);
SqueezingEstimate squeezing_covariance(const MeasurementStats& st,
                                       const SnlCalibration& snl,
                                       double lo_power);
SqueezingEstimate squeezing_lo_free(const MeasurementStats& st,
                                    double snl_equivalent);

/// One attenuation point for the scaling-law fit.
struct CovPoint {
  double transmission = 0;
  double cov = 0;
};

/// Power law |cov| = amplitude * T^exponent fitted on log-log axes.
struct PowerLawFit {
  double exponent = 0;
  double amplitude = 0;  ///< signed: carries the common sign of the points
  double exponent_se = 0;
  double residual_rms = 0;  ///< rms residual in log space
};

/// Ordinary least squares of log|cov| on log T. Requires >= 3 points with
/// T > 0 and covariances of one common nonzero sign; throws ConfigError
/// otherwise (the exponent is undefined for mixed or zero signs).
PowerLawFit fit_scaling_exponent(const std::vector<CovPoint>& points);

}  // namespace sqcorr
