#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pasim/basis.hpp"
#include "pasim/propagate.hpp"

namespace pasim::ensemble {

// Thermal initial-state selection. Nuclear-spin statistics weight the odd-J
// family by (I+1)/(2I+1) and the even-J family by I/(2I+1); for I = 3/2
// those are 5/8 and 3/8. Within a family every (box, J, M) level carries a
// Boltzmann factor and all M sublevels of one (box, J) are equally weighted.
struct EnsembleSpec {
  double temperature_uK = 100.0;
  double odd_fraction = 5.0 / 8.0;
  double even_fraction = 3.0 / 8.0;
  double member_weight_floor = 1e-4;  // drop members below this relative weight
  double truncation_warn_fraction = 0.01;
  // Initial states describe colliding atom pairs, so box levels whose
  // probability lives far inside the box (barrier-trapped quasibound
  // resonances) carry no initial weight. They stay in the basis and can be
  // populated by the field.
  bool exclude_localized_initial = true;
  double localized_R2_fraction = 0.1;  // <R^2> below this times R_max^2 is localized
};

struct InitialMember {
  int level_index;  // scattering level in the parity basis
  int J, M, box;
  double weight;  // normalized within the parity family
};

struct ThermalSelection {
  std::vector<InitialMember> members;
  double truncated_fraction = 0;  // thermal weight lost to the box cap
  bool truncation_warning = false;
};

ThermalSelection thermal_initial_states(const basis::BasisSet& basis,
                                        const EnsembleSpec& spec);

// <cos^2 theta>(t) over one manifold's projection, renormalized by the
// projected population; samples below the population floor are marked
// undefined (NaN).
std::vector<double> alignment_trace(const propagate::Trajectory& traj,
                                    basis::Manifold projection,
                                    double population_floor = 1e-10);

struct AlignmentWindow {
  double start_ns = 0;
  double end_ns = 0;     // trimmed down to an integer number of periods
  double period_ns = 0;  // rotational revival period 1/(2B)
};

// population-weighted time average of the projected alignment over an
// integer number of rotational periods
double static_alignment(const propagate::Trajectory& traj, basis::Manifold projection,
                        const AlignmentWindow& window);

// half peak-to-peak of the projected alignment over the same window
double dynamic_alignment_amplitude(const propagate::Trajectory& traj,
                                   basis::Manifold projection,
                                   const AlignmentWindow& window);

struct WeightedTrajectory {
  double weight = 0;
  basis::Parity parity = basis::Parity::even;
  propagate::Trajectory traj;
};

struct EnsembleResult {
  std::vector<double> t_ns;
  std::vector<double> pop_even, pop_odd, pop_total;      // target manifold
  std::vector<double> align_even, align_odd, align_total;  // NaN = undefined

  double final_population = 0;
  double static_alignment = std::numeric_limits<double>::quiet_NaN();
  double dynamic_amplitude = std::numeric_limits<double>::quiet_NaN();
  double initial_alignment = std::numeric_limits<double>::quiet_NaN();  // pre-pulse, scattering

  AlignmentWindow window;
  double undefined_floor = 1e-10;
  std::string alignment_convention =
      "conditional (cos^2 renormalized by the projected target population)";
};

struct AveragingOptions {
  double odd_fraction = 5.0 / 8.0;
  double even_fraction = 3.0 / 8.0;
  double population_floor = 1e-10;
  AlignmentWindow window;  // period_ns = 0 skips the scalar extraction
};

// Incoherent mixture: populations add with member weights; alignment traces
// combine as weighted sums of (population x alignment) over weighted
// population. Member order never matters; the reduction runs in a fixed
// order so repeated runs are bit identical.
EnsembleResult average_ensemble(const std::vector<WeightedTrajectory>& members,
                                const AveragingOptions& opts);

// Everything needed to run pulse experiments repeatedly on one calibrated
// system; building it performs all radial solves.
struct ExperimentSetup {
  std::shared_ptr<const basis::RadialBundle> bundle;
  std::shared_ptr<const basis::BasisSet> even;
  std::shared_ptr<const basis::BasisSet> odd;
  double revival_period_ns() const {
    return 1.0 / (2.0 * bundle->B_target_MHz * 1e-3);
  }
};

ExperimentSetup make_setup(const radial::PotentialCurve& ground,
                           const radial::PotentialCurve& excited, double mass_amu,
                           const basis::BundleOptions& opts);

struct ExperimentOptions {
  EnsembleSpec ensemble;
  propagate::PropagateOptions propagation;
  double tail_periods = 2.0;  // free evolution appended after the last pulse
  bool include_even = true;
  bool include_odd = true;
  basis::AssembleOptions assemble;
};

// Propagate the full thermal ensemble through a pulse sequence and average.
// M blocks with M < 0 reuse the M > 0 results (the couplings are symmetric
// under M -> -M).
EnsembleResult run_experiment(const ExperimentSetup& setup, const pulse::PulseTrain& train,
                              const ExperimentOptions& opts);

}  // namespace pasim::ensemble
