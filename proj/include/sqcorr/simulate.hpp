#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "sqcorr/scenario.hpp"

namespace sqcorr {

/// Two synchronized channels of digitized photocurrent samples.
/// Immutable after creation; safe to share across threads.
struct SampleRecord {
  Eigen::ArrayXd ch1;
  Eigen::ArrayXd ch2;
  std::optional<Scenario> scenario;  ///< absent for externally produced data
  std::uint64_t seed_used = 0;
};

/// Draw one record of scenario.digitizer.n_samples i.i.d. sample pairs:
///
///   i_j = e_j (a2/2 + a (x_lo +/- x_s)) + sqrt(2 e_j (1-e_j)) a xi_j + n_j
///
/// where a2 and the variances of x_lo, x_s come from effective_moments()
/// (loss channel applied), e_j is detector j's quantum efficiency (treated
/// as extra loss with an independent vacuum admixture xi_j per detector),
/// and n_j ~ N(0, en_variance_j). With ac_coupled the constant e_j a2/2 is
/// omitted from the stored samples.
///
/// Generation is chunked, each chunk seeded by derive_seed(seed, chunk), so
/// a fixed seed yields a bit-identical record for every worker count.
/// workers = 0 picks the hardware concurrency.
SampleRecord simulate_record(const Scenario& scenario, unsigned workers = 0);

}  // namespace sqcorr
