#pragma once
#include <cstdint>
#include <string>

#include "sqcorr/gaussian.hpp"

namespace sqcorr {

/// One analogue photodetector: quantum efficiency plus additive,
/// zero-mean Gaussian electronic noise of the amplifier chain.
struct DetectorModel {
  double efficiency = 1.0;   ///< quantum efficiency in (0, 1]
  double en_variance = 0.0;  ///< electronic-noise variance, intensity^2 units
  std::string label;
};

struct DigitizerConfig {
  double sample_rate = 2e6;        ///< samples/s, metadata only
  double bandwidth = 150e3;        ///< Hz, metadata only
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  bool ac_coupled = true;          ///< drop the constant mean-intensity term
};

enum class Preset { Custom, Opa, Kerr };

const char* preset_name(Preset p);

/// Complete description of one two-detector acquisition.
struct Scenario {
  GaussianState state;
  LocalOscillator lo;
  LossChannel loss;
  DetectorModel det1{1.0, 0.0, "det1"};
  DetectorModel det2{1.0, 0.0, "det2"};
  DigitizerConfig digitizer;
  Preset preset = Preset::Custom;
};

/// Throws ConfigError naming the offending dotted key.
void validate(const Scenario& s);

/// Built-in parameter sets for the two source types. The digitizer figures
/// and the Kerr efficiency are fixed; squeezing levels and electronic-noise
/// variances are editable defaults, not measured constants.
///
/// Opa:  2e6 samples/s, 150 kHz bandwidth, LO-only attenuation, unit
///       efficiency, near-pure state (vx=0.5, vy=2.05).
/// Kerr: 2e7 samples/s, 3 MHz bandwidth, joint attenuation, efficiency 0.98,
///       strongly impure state (vx=0.5, vy=30).
Scenario preset_scenario(Preset p);

/// Scenario for a dim squeezed beam split directly on a 50/50 beamsplitter
/// (no LO). The beam acts as its own phase reference, so its amplitude
/// quadrature plays the shared role and vacuum enters through the open port:
/// this is the standard model with lo.v_lo = amp_quadrature_var and a vacuum
/// signal. Correlations come out sign-swapped: squeezing gives cov < 0.
Scenario direct_split_scenario(double amplitude_sq, double amp_quadrature_var,
                               double en1, double en2, std::uint64_t n_samples,
                               std::uint64_t seed);

/// Variances of the shared per-sample variates and the effective LO
/// intensity after the loss channel (detector efficiency not included;
/// it acts per detector). LoOnly dims the LO classically (amplitude only),
/// Both/SignalOnly admix vacuum into the affected variances.
struct EffectiveMoments {
  double amplitude_sq;  ///< LO intensity at the beamsplitter output scale
  double v_lo;          ///< effective LO amplitude-quadrature variance
  double v_signal;      ///< effective rotated signal-quadrature variance
};

EffectiveMoments effective_moments(const Scenario& s);

/// LO power actually reaching the detectors, in configured amplitude_sq
/// units: T * amplitude_sq under Both/LoOnly attenuation, else amplitude_sq.
/// This is the power at which a shot-noise calibration applies.
double detected_lo_power(const Scenario& s);

/// Ensemble moments of the simulated record, including detector efficiency.
/// Independent predictions used to cross-check the sampler.
double expected_covariance(const Scenario& s);
double expected_var_diff(const Scenario& s);
double expected_channel_mean(const Scenario& s, int which_detector);

}  // namespace sqcorr
