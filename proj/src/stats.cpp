#include "sqcorr/stats.hpp"

#include <cmath>
#include <string>

#include "sqcorr/errors.hpp"

namespace sqcorr {

MeasurementStats finalize(const MomentAccumulator<double>& acc) {
  if (acc.count() < 2)
    throw ConfigError("record too short: need at least 2 samples, got " +
                      std::to_string(acc.count()));
  MeasurementStats st;
  st.n = acc.count();
  st.mean1 = acc.mean1();
  st.mean2 = acc.mean2();
  st.var1 = acc.var1();
  st.var2 = acc.var2();
  st.var_diff = acc.var_diff();
  st.cov = acc.covariance();
  const double nm1 = static_cast<double>(st.n - 1);
  st.se_cov = std::sqrt((st.var1 * st.var2 + st.cov * st.cov) / nm1);
  st.se_var_diff = std::sqrt(2.0 / nm1) * st.var_diff;
  return st;
}

MeasurementStats compute_stats(Eigen::Ref<const Eigen::ArrayXd> ch1,
                               Eigen::Ref<const Eigen::ArrayXd> ch2) {
  if (ch1.size() != ch2.size())
    throw ConfigError("record channels have unequal lengths");
  if (ch1.size() < 2)
    throw ConfigError("record too short: need at least 2 samples, got " +
                      std::to_string(ch1.size()));
  if (!ch1.allFinite() || !ch2.allFinite())
    throw ConfigError("record contains non-finite samples");
  MomentAccumulator<double> acc;
  acc.accumulate(ch1, ch2);
  return finalize(acc);
}

MeasurementStats compute_stats(const SampleRecord& record) {
  return compute_stats(record.ch1, record.ch2);
}

double coincidence_moment(const MeasurementStats& stats) {
  return stats.cov + stats.mean1 * stats.mean2;
}

}  // namespace sqcorr
