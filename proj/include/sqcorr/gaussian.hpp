#pragma once

// Gaussian quadrature statistics of the signal and local-oscillator modes,
// in shot-noise units (vacuum quadrature variance == 1), plus the effect of
// phase rotation and linear loss on them.

namespace sqcorr {

/// Single-mode Gaussian state in its principal-axis frame: the X-Y
/// cross-correlation is zero by convention, and any rotation of the
/// squeezing ellipse is expressed through the LO phase instead.
struct GaussianState {
  double vx = 1.0;  ///< variance of the X quadrature, vacuum == 1
  double vy = 1.0;  ///< variance of the Y quadrature, vacuum == 1
};

inline constexpr GaussianState vacuum_state() { return {1.0, 1.0}; }

/// Strong reference beam; its phase selects the measured signal quadrature.
struct LocalOscillator {
  double amplitude_sq = 100.0;  ///< mean photon-flux scale per sample
  double phase_rad = 0.0;       ///< relative phase to the signal, radians
  double v_lo = 1.0;            ///< amplitude-quadrature variance; 1 == shot-noise limited
};

/// Which mode(s) a linear attenuator acts on.
enum class LossMode { SignalOnly, LoOnly, Both };

/// Beamsplitter loss model with transmission T = 1 - eta. T = 1 is identity.
struct LossChannel {
  double transmission = 1.0;
  LossMode mode = LossMode::Both;
};

/// Throws ConfigError (message names the offending field) if invalid.
void validate(const GaussianState& s, const char* key_prefix = "state");
void validate(const LocalOscillator& lo, const char* key_prefix = "lo");
void validate(const LossChannel& loss, const char* key_prefix = "loss");

/// Variance of the rotated quadrature X_phi = cos(phi) X + sin(phi) Y:
/// cos^2(phi) vx + sin^2(phi) vy. Pi-periodic, bounded by [min(vx,vy), max(vx,vy)].
double rotated_variance(const GaussianState& state, double phase_rad);

/// Vacuum admixture of a beamsplitter with transmission T:
/// v -> T v + (1 - T). Affine in v; v = 1 is a fixed point.
double apply_loss_to_variance(double v, double transmission);

/// Covariance of the two detector photocurrents for ideal detectors, in
/// intensity^2 units:
///   Both:       T^2 a2 [v_lo - v_phi]        (joint attenuation, quadratic in T)
///   LoOnly:     T   a2 [v_lo - v_phi]        (LO dimming, linear in T)
///   SignalOnly:     a2 [v_lo - (T v_phi + 1 - T)]
/// where a2 = lo.amplitude_sq and v_phi = rotated_variance(state, lo.phase_rad).
/// All three coincide at T = 1. Positive iff the probed quadrature is below
/// the LO noise (squeezing witness when v_lo = 1).
double theoretical_covariance(const GaussianState& state,
                              const LocalOscillator& lo,
                              const LossChannel& loss);

}  // namespace sqcorr
