#pragma once
#include <cstdint>

// Deterministic random-number machinery. Everything here is fully specified
// bit-for-bit (no std::normal_distribution, whose output is
// implementation-defined), so a fixed seed reproduces identical sample
// streams across runs and across standard libraries.

namespace sqcorr::rng {

/// SplitMix64 finalizer: one full-avalanche 64-bit mixing step.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Hash a (stream, index) pair into an independent substream seed.
/// Used to derive per-chunk and per-run seeds from one master seed so that
/// parallel generation is reproducible for any worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (a * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  h = splitmix64_next(s);
  s = h ^ (b * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull);
  return splitmix64_next(s);
}

/// xoshiro256++ (Blackman & Vigna). Fast, tiny state, well-tested.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is invalid
  }

  std::uint64_t operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Map a raw 64-bit word to a uniform double strictly inside (0, 1).
inline double uniform_open01(std::uint64_t word) {
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16).
/// Accurate to about 1e-16 relative over (0, 1).
double standard_normal_quantile(double p);

/// Stream of i.i.d. N(0,1) deviates: one uniform word per deviate through
/// the inverse CDF, so consumption is exactly one engine call per draw.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return standard_normal_quantile(uniform_open01(eng_())); }

 private:
  Xoshiro256pp eng_;
};

}  // namespace sqcorr::rng
