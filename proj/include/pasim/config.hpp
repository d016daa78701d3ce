#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pasim/basis.hpp"
#include "pasim/ensemble.hpp"
#include "pasim/pulse.hpp"
#include "pasim/radial.hpp"

namespace pasim::config {

// One sweep axis: a named pulse/train parameter with its value list.
struct SweepAxis {
  std::string name;
  std::vector<double> values;  // finite, deduplicated, sorted on parse
};

// A fully resolved run configuration. Parsed from the plain-text format
// described in the README: '[section]' headers, 'key = value [unit]' lines,
// '#' comments. Every dimensioned quantity must carry its unit; unknown
// keys or sections are errors.
struct RunConfig {
  // [system]
  double reduced_mass_amu = radial::kReducedMassAmu;
  double mu0_debye = 12.0;

  // [potential.ground] / [potential.excited]
  struct Potential {
    std::string kind = "calibrated";  // calibrated | model-ground | model-excited |
                                      // tabulated | calibrate
    double c12 = 0, c6 = 0, c6x = 0, c3 = 0;
    std::string file;
    double binding_MHz = 0, B_MHz = 0;  // targets for kind = calibrate
    int level_index = -1;               // designated level (-1 = shipped default)
  } ground, excited;

  // [grid]
  radial::RadialGridSpec grid;

  // [basis]
  int j_max = 5;
  int box_states = 32;

  // [ensemble]
  ensemble::EnsembleSpec ens;
  bool include_even = true;
  bool include_odd = true;

  // [pulse]
  pulse::PulseSpec pulse_base;  // center filled from the time-origin rule
  int pulse_count = 1;
  double pulse_delay_ns = 0;
  bool allow_overlap = false;

  // [propagation]
  propagate::PropagateOptions prop;
  double tail_periods = 2.0;
  double window_sigmas = 5.0;

  // [sweep]
  std::vector<SweepAxis> sweep_axes;
  int workers = 1;

  // canonical text round trip
  std::string to_text() const;
  std::uint64_t hash() const;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
};

// Time origin: t = 0 sits window_sigmas * sigma before the first pulse
// center. Builds the train from the resolved pulse section.
pulse::PulseTrain make_train(const RunConfig& cfg);

// Apply one sweep-axis value to a copy of the configuration.
void apply_axis(RunConfig& cfg, const std::string& name, double value);

// Resolve the potential sections into curves (may run a calibration).
radial::PotentialCurve make_ground_curve(const RunConfig& cfg);
radial::PotentialCurve make_excited_curve(const RunConfig& cfg);

// Designated level indices for the target / intermediate manifolds.
int ground_level_index(const RunConfig& cfg);
int excited_level_index(const RunConfig& cfg);

ensemble::ExperimentSetup make_setup(const RunConfig& cfg);
ensemble::ExperimentOptions make_experiment_options(const RunConfig& cfg);

}  // namespace pasim::config
