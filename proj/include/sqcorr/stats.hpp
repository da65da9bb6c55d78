#pragma once
#include <Eigen/Core>
#include <cstdint>

#include "sqcorr/simulate.hpp"

namespace sqcorr {

/// Single-pass moment accumulator for a pair of channels: means, central
/// second moments of each channel and of their difference, and the cross
/// moment. Welford-style updates; merge() uses the parallel (Chan) form, so
/// partial accumulators over record partitions combine into the same result
/// as one pass, independent of partition boundaries to within rounding.
template <typename Scalar = double>
class MomentAccumulator {
 public:
  void add(Scalar x1, Scalar x2) {
    n_ += 1;
    const Scalar inv_n = Scalar(1) / Scalar(n_);
    const Scalar d1 = x1 - mean1_;
    const Scalar d2 = x2 - mean2_;
    mean1_ += d1 * inv_n;
    mean2_ += d2 * inv_n;
    m2_1_ += d1 * (x1 - mean1_);
    m2_2_ += d2 * (x2 - mean2_);
    cross_ += d1 * (x2 - mean2_);
    const Scalar xd = x1 - x2;
    const Scalar dd = xd - mean_d_;
    mean_d_ += dd * inv_n;
    m2_d_ += dd * (xd - mean_d_);
  }

  void merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) { *this = o; return; }
    const std::uint64_t n = n_ + o.n_;
    const Scalar w = Scalar(n_) * Scalar(o.n_) / Scalar(n);
    const Scalar d1 = o.mean1_ - mean1_;
    const Scalar d2 = o.mean2_ - mean2_;
    const Scalar dd = o.mean_d_ - mean_d_;
    m2_1_ += o.m2_1_ + d1 * d1 * w;
    m2_2_ += o.m2_2_ + d2 * d2 * w;
    cross_ += o.cross_ + d1 * d2 * w;
    m2_d_ += o.m2_d_ + dd * dd * w;
    mean1_ += d1 * Scalar(o.n_) / Scalar(n);
    mean2_ += d2 * Scalar(o.n_) / Scalar(n);
    mean_d_ += dd * Scalar(o.n_) / Scalar(n);
    n_ = n;
  }

  void accumulate(Eigen::Ref<const Eigen::ArrayXd> ch1,
                  Eigen::Ref<const Eigen::ArrayXd> ch2) {
    for (Eigen::Index i = 0; i < ch1.size(); ++i)
      add(Scalar(ch1[i]), Scalar(ch2[i]));
  }

  std::uint64_t count() const { return n_; }
  Scalar mean1() const { return mean1_; }
  Scalar mean2() const { return mean2_; }
  /// Unbiased (n-1 denominator) moments.
  Scalar var1() const { return m2_1_ / Scalar(n_ - 1); }
  Scalar var2() const { return m2_2_ / Scalar(n_ - 1); }
  Scalar covariance() const { return cross_ / Scalar(n_ - 1); }
  Scalar var_diff() const { return m2_d_ / Scalar(n_ - 1); }

 private:
  std::uint64_t n_ = 0;
  Scalar mean1_{}, mean2_{}, mean_d_{};
  Scalar m2_1_{}, m2_2_{}, m2_d_{}, cross_{};
};

/// Sufficient statistics of one record; inputs to all squeezing estimators.
/// All variances are unbiased. Standard errors use Gaussian theory:
/// se_cov = sqrt((var1 var2 + cov^2)/(n-1)), se_var = sqrt(2/(n-1)) var.
struct MeasurementStats {
  std::uint64_t n = 0;
  double mean1 = 0, mean2 = 0;
  double var1 = 0, var2 = 0;
  double var_diff = 0;
  double cov = 0;
  double se_cov = 0;
  double se_var_diff = 0;
};

/// Throws ConfigError on n < 2 or non-finite samples.
MeasurementStats compute_stats(Eigen::Ref<const Eigen::ArrayXd> ch1,
                               Eigen::Ref<const Eigen::ArrayXd> ch2);
MeasurementStats compute_stats(const SampleRecord& record);

/// Finalize an accumulator into MeasurementStats (n >= 2 required).
MeasurementStats finalize(const MomentAccumulator<double>& acc);

/// Normally ordered coincidence moment <:i1 i2:> = cov + <i1><i2>.
/// Reduces to cov exactly on zero-mean (AC-coupled) records.
double coincidence_moment(const MeasurementStats& stats);

}  // namespace sqcorr
