#include "sqcorr/scenario.hpp"

#include <cmath>
#include <string>

#include "sqcorr/errors.hpp"

namespace sqcorr {

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::Opa: return "opa";
    case Preset::Kerr: return "kerr";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

static void validate_detector(const DetectorModel& d, const char* key_prefix) {
  const std::string p(key_prefix);
  if (!(d.efficiency > 0.0 && d.efficiency <= 1.0))
    throw ConfigError(p + ".efficiency: must lie in (0, 1], got " +
                      std::to_string(d.efficiency));
  if (!(d.en_variance >= 0.0) || !std::isfinite(d.en_variance))
    throw ConfigError(p + ".en_variance: must be finite and >= 0");
}

static void validate_digitizer(const DigitizerConfig& d) {
  if (d.n_samples < 2)
    throw ConfigError("digitizer.n_samples: must be >= 2, got " +
                      std::to_string(d.n_samples));
  if (!(d.sample_rate > 0.0))
    throw ConfigError("digitizer.sample_rate: must be > 0");
  if (!(d.bandwidth > 0.0))
    throw ConfigError("digitizer.bandwidth: must be > 0");
}

void validate(const Scenario& s) {
  validate(s.state);
  validate(s.lo);
  validate(s.loss);
  validate_detector(s.det1, "det1");
  validate_detector(s.det2, "det2");
  validate_digitizer(s.digitizer);
  if (s.preset == Preset::Opa && s.loss.mode != LossMode::LoOnly)
    throw ConfigError("loss.mode: preset opa requires lo_only attenuation");
  if (s.preset == Preset::Kerr && s.loss.mode != LossMode::Both)
    throw ConfigError("loss.mode: preset kerr requires joint (both) attenuation");
}

Scenario preset_scenario(Preset p) {
  Scenario s;
  switch (p) {
    case Preset::Opa:
      s.state = {0.5, 2.05};  // near-pure: vx*vy = 1.025
      s.lo = {100.0, 0.0, 1.0};
      s.loss = {1.0, LossMode::LoOnly};
      s.det1 = {1.0, 10.0, "det1"};
      s.det2 = {1.0, 10.0, "det2"};
      s.digitizer = {2e6, 150e3, 100000, 1, true};
      s.preset = Preset::Opa;
      return s;
    case Preset::Kerr:
      s.state = {0.5, 30.0};  // strongly impure: vy >> 1/vx
      s.lo = {100.0, 0.0, 1.0};
      s.loss = {1.0, LossMode::Both};
      s.det1 = {0.98, 10.0, "det1"};
      s.det2 = {0.98, 10.0, "det2"};
      s.digitizer = {2e7, 3e6, 100000, 1, true};
      s.preset = Preset::Kerr;
      return s;
    case Preset::Custom:
      return s;
  }
  return s;
}

Scenario direct_split_scenario(double amplitude_sq, double amp_quadrature_var,
                               double en1, double en2, std::uint64_t n_samples,
                               std::uint64_t seed) {
  Scenario s;
  s.state = vacuum_state();  // open beamsplitter port
  s.lo = {amplitude_sq, 0.0, amp_quadrature_var};
  s.loss = {1.0, LossMode::Both};
  s.det1 = {1.0, en1, "det1"};
  s.det2 = {1.0, en2, "det2"};
  s.digitizer.n_samples = n_samples;
  s.digitizer.seed = seed;
  return s;
}

EffectiveMoments effective_moments(const Scenario& s) {
  const double t = s.loss.transmission;
  const double v_phi = rotated_variance(s.state, s.lo.phase_rad);
  switch (s.loss.mode) {
    case LossMode::Both:
      return {t * s.lo.amplitude_sq, apply_loss_to_variance(s.lo.v_lo, t),
              apply_loss_to_variance(v_phi, t)};
    case LossMode::LoOnly:
      return {t * s.lo.amplitude_sq, s.lo.v_lo, v_phi};
    case LossMode::SignalOnly:
      return {s.lo.amplitude_sq, s.lo.v_lo, apply_loss_to_variance(v_phi, t)};
  }
  return {s.lo.amplitude_sq, s.lo.v_lo, v_phi};
}

double detected_lo_power(const Scenario& s) {
  return (s.loss.mode == LossMode::SignalOnly)
             ? s.lo.amplitude_sq
             : s.loss.transmission * s.lo.amplitude_sq;
}

double expected_covariance(const Scenario& s) {
  const EffectiveMoments m = effective_moments(s);
  return s.det1.efficiency * s.det2.efficiency * m.amplitude_sq *
         (m.v_lo - m.v_signal);
}

double expected_var_diff(const Scenario& s) {
  const EffectiveMoments m = effective_moments(s);
  const double e1 = s.det1.efficiency;
  const double e2 = s.det2.efficiency;
  // Per-detector vacuum admixture contributes 2 e (1-e) a2 per channel.
  const double optical = m.amplitude_sq * ((e1 - e2) * (e1 - e2) * m.v_lo +
                                           (e1 + e2) * (e1 + e2) * m.v_signal +
                                           2.0 * e1 * (1.0 - e1) +
                                           2.0 * e2 * (1.0 - e2));
  return optical + s.det1.en_variance + s.det2.en_variance;
}

double expected_channel_mean(const Scenario& s, int which_detector) {
  if (s.digitizer.ac_coupled) return 0.0;
  const EffectiveMoments m = effective_moments(s);
  const double eff =
      (which_detector == 1) ? s.det1.efficiency : s.det2.efficiency;
  return 0.5 * eff * m.amplitude_sq;
}

}  // namespace sqcorr
