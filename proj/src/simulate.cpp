#include "sqcorr/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "sqcorr/rng.hpp"

namespace sqcorr {

namespace {

constexpr std::uint64_t kChunkSamples = 1u << 16;

// Per-record generation constants, resolved once from the scenario.
struct Kernel {
  double alpha;    // sqrt of effective LO intensity
  double half_dc;  // a2/2 constant term (0 when ac-coupled)
  double sd_lo, sd_sig;
  double e1, e2;
  double vac1, vac2;  // sqrt(2 e (1-e)) * alpha, per-detector vacuum admixture
  double sd_en1, sd_en2;
  bool draw_optical, draw_vac1, draw_vac2, draw_en1, draw_en2;
};

Kernel make_kernel(const Scenario& s) {
  const EffectiveMoments m = effective_moments(s);
  Kernel k{};
  k.alpha = std::sqrt(m.amplitude_sq);
  k.half_dc = s.digitizer.ac_coupled ? 0.0 : 0.5 * m.amplitude_sq;
  k.sd_lo = std::sqrt(m.v_lo);
  k.sd_sig = std::sqrt(m.v_signal);
  k.e1 = s.det1.efficiency;
  k.e2 = s.det2.efficiency;
  k.vac1 = std::sqrt(2.0 * k.e1 * (1.0 - k.e1)) * k.alpha;
  k.vac2 = std::sqrt(2.0 * k.e2 * (1.0 - k.e2)) * k.alpha;
  k.sd_en1 = std::sqrt(s.det1.en_variance);
  k.sd_en2 = std::sqrt(s.det2.en_variance);
  // Structurally absent noise terms consume no RNG draws. The draw layout
  // depends only on the scenario, so determinism per (scenario, seed) holds.
  k.draw_optical = k.alpha > 0.0;
  k.draw_vac1 = k.vac1 > 0.0;
  k.draw_vac2 = k.vac2 > 0.0;
  k.draw_en1 = k.sd_en1 > 0.0;
  k.draw_en2 = k.sd_en2 > 0.0;
  return k;
}

void fill_chunk(const Kernel& k, std::uint64_t chunk_seed, double* ch1,
                double* ch2, std::uint64_t count) {
  rng::NormalStream z(chunk_seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    double opt1 = k.half_dc, opt2 = k.half_dc;
    if (k.draw_optical) {
      const double x_lo = k.sd_lo > 0.0 ? k.sd_lo * z() : 0.0;
      const double x_s = k.sd_sig > 0.0 ? k.sd_sig * z() : 0.0;
      opt1 += k.alpha * (x_lo + x_s);
      opt2 += k.alpha * (x_lo - x_s);
    }
    double y1 = k.e1 * opt1;
    double y2 = k.e2 * opt2;
    if (k.draw_vac1) y1 += k.vac1 * z();
    if (k.draw_vac2) y2 += k.vac2 * z();
    if (k.draw_en1) y1 += k.sd_en1 * z();
    if (k.draw_en2) y2 += k.sd_en2 * z();
    ch1[i] = y1;
    ch2[i] = y2;
  }
}

}  // namespace

SampleRecord simulate_record(const Scenario& scenario, unsigned workers) {
  validate(scenario);
  const std::uint64_t n = scenario.digitizer.n_samples;
  const std::uint64_t master = scenario.digitizer.seed;
  const Kernel kernel = make_kernel(scenario);

  SampleRecord rec;
  rec.ch1.resize(static_cast<Eigen::Index>(n));
  rec.ch2.resize(static_cast<Eigen::Index>(n));
  rec.scenario = scenario;
  rec.seed_used = master;

  const std::uint64_t n_chunks = (n + kChunkSamples - 1) / kChunkSamples;
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks);

  auto run = [&](std::uint64_t first_chunk, std::uint64_t last_chunk) {
    for (std::uint64_t c = first_chunk; c < last_chunk; ++c) {
      const std::uint64_t begin = c * kChunkSamples;
      const std::uint64_t count = std::min(kChunkSamples, n - begin);
      fill_chunk(kernel, rng::derive_seed(master, c), rec.ch1.data() + begin,
                 rec.ch2.data() + begin, count);
    }
  };

  if (workers <= 1) {
    run(0, n_chunks);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = n_chunks * w / workers;
      const std::uint64_t hi = n_chunks * (w + 1) / workers;
      pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return rec;
}

}  // namespace sqcorr
