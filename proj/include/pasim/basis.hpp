#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasim/angmom.hpp"
#include "pasim/pulse.hpp"
#include "pasim/radial.hpp"

namespace pasim::basis {

// The two nuclear-spin symmetry classes of scattering J values. Each class
// is propagated separately and combined statistically downstream.
enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline const char* name(Parity p) { return p == Parity::even ? "even" : "odd"; }

enum class Manifold { scattering, intermediate, target };

struct ChannelLevel {
  Manifold manifold;
  int radial_index;  // box-state index for scattering, vibrational index otherwise
  angmom::AngularState ang;
  double energy_GHz;  // static diagonal in the rotating frame
  double B_v_MHz;
};

// Radial inputs shared by both parity bases: per-J ground-channel solutions
// (box states), the rotationless bound levels, and the Franck-Condon table.
struct RadialBundle {
  double mass_amu = 0;
  int J_max = 0;
  int n_box = 0;

  std::vector<radial::RadialSolution> ground_by_J;  // index = J, 0..J_max
  radial::RadialSolution excited;                   // rotationless solve

  int target_level = 0;        // bound index in ground_by_J[0]
  int intermediate_level = 0;  // bound index in excited
  double binding_MHz = 0;      // of the target level, positive
  double binding_intermediate_MHz = 0;  // below the excited curve's asymptote
  double B_target_MHz = 0;
  double B_intermediate_MHz = 0;

  Eigen::MatrixXd fc_up;  // (J_max+1) x n_box: <box_{n,J} | v'>
  double fc_down = 0;     // <v' | v''>
};

struct BundleOptions {
  int J_max = 5;
  int n_box = 32;
  int target_level_index = radial::kTargetLevelIndex;
  int intermediate_level_index = radial::kIntermediateLevelIndex;
  radial::RadialGridSpec grid;
  bool check_convergence = true;  // applied to the two bound-level solves
};

std::shared_ptr<const RadialBundle> build_radial_bundle(
    const radial::PotentialCurve& ground, const radial::PotentialCurve& excited,
    double mass_amu, const BundleOptions& opts);

// One parity family's ro-vibronic level list: scattering box states with
// J <= J_max in the parity class, the single intermediate vibrational level
// on the dipole-reachable opposite-parity ladder up to J_max + 1, and the
// target level's rotational ladder with J <= J_max. Rigid-rotor rungs whose
// rotational energy exceeds the level's own binding are dropped: the
// rotational barrier strips them from the real molecule, and keeping them
// would park fake bound levels inside the continuum. Levels are ordered by
// (M, manifold, J, radial index).
struct BasisSet {
  Parity parity = Parity::even;
  int J_max = 0;
  int n_box = 0;
  std::shared_ptr<const RadialBundle> radial;
  std::vector<ChannelLevel> levels;

  int size() const { return static_cast<int>(levels.size()); }
};

std::shared_ptr<const BasisSet> build_basis(std::shared_ptr<const RadialBundle> radial,
                                            int J_max, Parity parity);

struct Coupling {
  int i, j;      // i < j
  double coeff;  // rotational factor x Franck-Condon overlap
};

struct Cos2Pair {
  int i, j;      // i <= j, same manifold and M
  double value;  // angular element x radial overlap
};

struct AssembleOptions {
  // Model-reduction switch: replace every rotational dipole factor by 1.
  // With a single J per manifold this collapses the model to a pure
  // vibration-electronic ladder with no alignment dynamics.
  bool unit_rotational_factors = false;
};

// Rotating-frame Hamiltonian: H(t)/h = diag + chirp(t) + envelope(t)/2 x C.
// Scattering rows sit at their box energies, intermediate rows at the
// rotational offset minus the instantaneous detuning, target rows at the
// two-photon (field-free) energy -binding + B J(J+1).
struct HamiltonianModel {
  std::shared_ptr<const BasisSet> basis;  // null for derived sub-blocks
  pulse::PulseTrain train;

  std::vector<double> diag_GHz;
  std::vector<uint8_t> chirped;  // rows that follow -delta_eff(t)
  std::vector<Manifold> manifold;
  std::vector<Coupling> couplings;

  std::vector<Cos2Pair> cos2_scattering, cos2_intermediate, cos2_target;

  int size() const { return static_cast<int>(diag_GHz.size()); }
  const std::vector<Cos2Pair>& cos2(Manifold m) const {
    switch (m) {
      case Manifold::scattering: return cos2_scattering;
      case Manifold::intermediate: return cos2_intermediate;
      default: return cos2_target;
    }
  }
};

HamiltonianModel assemble_hamiltonian(std::shared_ptr<const BasisSet> basis,
                                      const pulse::PulseTrain& train,
                                      const AssembleOptions& opts = {});

}  // namespace pasim::basis
