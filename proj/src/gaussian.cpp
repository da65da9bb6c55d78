#include "sqcorr/gaussian.hpp"

#include <cmath>
#include <string>

#include "sqcorr/errors.hpp"

namespace sqcorr {

void validate(const GaussianState& s, const char* key_prefix) {
  const std::string p(key_prefix);
  if (!(s.vx > 0.0) || !std::isfinite(s.vx))
    throw ConfigError(p + ".vx: must be finite and > 0, got " + std::to_string(s.vx));
  if (!(s.vy > 0.0) || !std::isfinite(s.vy))
    throw ConfigError(p + ".vy: must be finite and > 0, got " + std::to_string(s.vy));
  if (s.vx * s.vy < 1.0 - 1e-12)
    throw ConfigError(p + ".vx*" + p + ".vy: uncertainty product " +
                      std::to_string(s.vx * s.vy) + " below the Heisenberg bound 1");
}

void validate(const LocalOscillator& lo, const char* key_prefix) {
  const std::string p(key_prefix);
  if (!(lo.amplitude_sq >= 0.0) || !std::isfinite(lo.amplitude_sq))
    throw ConfigError(p + ".amplitude_sq: must be finite and >= 0");
  if (!std::isfinite(lo.phase_rad))
    throw ConfigError(p + ".phase_rad: must be finite");
  if (!(lo.v_lo >= 0.0) || !std::isfinite(lo.v_lo))
    throw ConfigError(p + ".v_lo: must be finite and >= 0");
}

void validate(const LossChannel& loss, const char* key_prefix) {
  const std::string p(key_prefix);
  if (!(loss.transmission >= 0.0 && loss.transmission <= 1.0))
    throw ConfigError(p + ".transmission: must lie in [0, 1], got " +
                      std::to_string(loss.transmission));
}

double rotated_variance(const GaussianState& state, double phase_rad) {
  const double c = std::cos(phase_rad);
  const double s = std::sin(phase_rad);
  return c * c * state.vx + s * s * state.vy;
}

double apply_loss_to_variance(double v, double transmission) {
  if (!(transmission >= 0.0 && transmission <= 1.0))
    throw ConfigError("loss.transmission: must lie in [0, 1], got " +
                      std::to_string(transmission));
  return transmission * v + (1.0 - transmission);
}

double theoretical_covariance(const GaussianState& state,
                              const LocalOscillator& lo,
                              const LossChannel& loss) {
  validate(loss);
  const double t = loss.transmission;
  const double v_phi = rotated_variance(state, lo.phase_rad);
  switch (loss.mode) {
    case LossMode::Both:
      return t * t * lo.amplitude_sq * (lo.v_lo - v_phi);
    case LossMode::LoOnly:
      return t * lo.amplitude_sq * (lo.v_lo - v_phi);
    case LossMode::SignalOnly:
      return lo.amplitude_sq * (lo.v_lo - apply_loss_to_variance(v_phi, t));
  }
  return 0.0;  // unreachable
}

}  // namespace sqcorr
