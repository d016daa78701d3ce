#include "pasim/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::pulse {

namespace cn = pasim::constants;

double intensity_to_rabi(double intensity_W_cm2, double mu0_debye) {
  if (intensity_W_cm2 < 0 || mu0_debye < 0)
    throw ValidationError("intensity_to_rabi: inputs must be non-negative");
  return cn::rabi_MHz(intensity_W_cm2, mu0_debye);
}

double envelope(const PulseSpec& p, double t_ns) {
  if (p.sigma_ns <= 0) throw ValidationError("pulse: sigma must be positive");
  const double u = (t_ns - p.center_ns) / p.sigma_ns;
  return intensity_to_rabi(p.intensity_W_cm2, p.mu0_debye) * std::exp(-u * u);
}

double instantaneous_detuning(const PulseSpec& p, double t_ns) {
  return p.detuning_MHz + p.chirp_MHz_per_ns * (t_ns - p.center_ns);
}

std::vector<PulseSpec> make_train(const PulseSpec& base, int n, double delay_ns,
                                  bool allow_overlap) {
  if (n < 1) throw ValidationError("make_train: need at least one pulse");
  if (base.sigma_ns <= 0) throw ValidationError("make_train: sigma must be positive");
  if (n > 1 && delay_ns < 5.0 * base.sigma_ns && !allow_overlap)
    throw ValidationError("make_train: delay below 5 sigma makes pulses overlap");
  std::vector<PulseSpec> out(static_cast<size_t>(n), base);
  for (int k = 0; k < n; ++k) out[k].center_ns = base.center_ns + k * delay_ns;
  return out;
}

PulseTrain::PulseTrain(std::vector<PulseSpec> pulses, double window_sigmas)
    : pulses_(std::move(pulses)), window_sigmas_(window_sigmas) {
  if (pulses_.empty()) throw ValidationError("PulseTrain: empty pulse list");
  if (window_sigmas_ <= 0) throw ValidationError("PulseTrain: window must be positive");
  std::sort(pulses_.begin(), pulses_.end(),
            [](const PulseSpec& a, const PulseSpec& b) { return a.center_ns < b.center_ns; });
  carrier_MHz_ = pulses_.front().detuning_MHz;
  for (const auto& p : pulses_) {
    const double a = p.center_ns - window_sigmas_ * p.sigma_ns;
    const double b = p.center_ns + window_sigmas_ * p.sigma_ns;
    if (!windows_.empty() && a <= windows_.back().second)
      windows_.back().second = std::max(windows_.back().second, b);
    else
      windows_.emplace_back(a, b);
  }
}

double PulseTrain::envelope_MHz(double t_ns) const {
  double acc = 0.0;
  for (const auto& p : pulses_) {
    if (std::abs(t_ns - p.center_ns) > window_sigmas_ * p.sigma_ns) continue;
    acc += envelope(p, t_ns);
  }
  return acc;
}

double PulseTrain::delta_eff_MHz(double t_ns) const {
  for (const auto& p : pulses_)
    if (std::abs(t_ns - p.center_ns) <= window_sigmas_ * p.sigma_ns)
      return instantaneous_detuning(p, t_ns);
  return carrier_MHz_;
}

double PulseTrain::delta_integral_GHz_ns(double t_ns) const {
  // carrier baseline plus each pulse's local ramp contribution
  double acc = carrier_MHz_ * t_ns;
  for (const auto& p : pulses_) {
    const double w = window_sigmas_ * p.sigma_ns;
    const double a = p.center_ns - w;
    if (t_ns <= a) continue;
    const double u = std::min(t_ns, p.center_ns + w);
    const double ua = a - p.center_ns, ub = u - p.center_ns;
    acc += (p.detuning_MHz - carrier_MHz_) * (u - a) +
           0.5 * p.chirp_MHz_per_ns * (ub * ub - ua * ua);
  }
  return acc * 1e-3;
}

}  // namespace pasim::pulse
