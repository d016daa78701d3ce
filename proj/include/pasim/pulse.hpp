#pragma once

#include <utility>
#include <vector>

namespace pasim::pulse {

// One linearly Z-polarized Gaussian pulse. The amplitude envelope is
// exp(-(t-tc)^2/sigma^2); the instantaneous carrier detuning sweeps as
// delta(t) = delta + r (t - tc) with r the chirp rate (the quadratic-phase
// coefficient of the field is chi = pi r). mu0 is the transition-dipole
// scale used to convert peak intensity into a Rabi frequency.
struct PulseSpec {
  double intensity_W_cm2 = 1000.0;
  double sigma_ns = 10.0;
  double chirp_MHz_per_ns = 0.0;
  double center_ns = 0.0;
  double detuning_MHz = 0.0;
  double mu0_debye = 1.0;
};

// nu_R = mu0 E0 / h in MHz (ordinary frequency), E0 = sqrt(2 I0 / (eps0 c)).
double intensity_to_rabi(double intensity_W_cm2, double mu0_debye);

// Rabi-frequency envelope Omega0 exp(-(t-tc)^2/sigma^2), MHz.
double envelope(const PulseSpec& p, double t_ns);

// delta + r (t - tc), MHz; positive rates sweep blue over time.
double instantaneous_detuning(const PulseSpec& p, double t_ns);

// n copies of base spaced by delay, sharing one carrier phase reference.
// Rejects overlapping pulses (delay < 5 sigma) unless allow_overlap is set.
std::vector<PulseSpec> make_train(const PulseSpec& base, int n, double delay_ns,
                                  bool allow_overlap = false);

// A time-ordered pulse sequence with its integration windows. Between
// windows the field is treated as zero and the frame detuning rests at the
// carrier value, so each pulse's chirp ramp is local to its own window; the
// accumulated detuning phase stays continuous.
class PulseTrain {
 public:
  PulseTrain() = default;
  explicit PulseTrain(std::vector<PulseSpec> pulses, double window_sigmas = 5.0);

  const std::vector<PulseSpec>& pulses() const { return pulses_; }
  double window_sigmas() const { return window_sigmas_; }

  // merged active windows, time-ordered
  const std::vector<std::pair<double, double>>& windows() const { return windows_; }
  double start_ns() const { return windows_.front().first; }
  double end_ns() const { return windows_.back().second; }

  double envelope_MHz(double t_ns) const;       // sum of member envelopes
  double delta_eff_MHz(double t_ns) const;      // frame detuning rule
  double delta_integral_GHz_ns(double t_ns) const;  // int_0^t delta_eff dt

 private:
  std::vector<PulseSpec> pulses_;
  double window_sigmas_ = 5.0;
  double carrier_MHz_ = 0.0;  // detuning between windows
  std::vector<std::pair<double, double>> windows_;
};

}  // namespace pasim::pulse
