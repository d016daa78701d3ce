#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasim/grid.hpp"
#include "pasim/potential.hpp"

namespace pasim::radial {

struct SolveOptions {
  int max_box_count = 64;          // above-threshold states retained
  double E_box_cap_GHz = 0;        // additional energy cap on box states (0 = none)
  double bound_threshold_GHz = -1e-3;  // E below this counts as bound
  bool keep_all = false;           // retain the complete discrete spectrum
  bool check_convergence = false;  // re-solve at doubled density and compare
  double convergence_tol_MHz = 1e-3;
};

// Eigensolution of one radial channel: bound levels (ascending) followed by
// box-discretized continuum states. Energies are relative to the curve's
// asymptote; eigenfunctions are orthonormal under the mapped quadrature.
struct RadialSolution {
  std::string label;
  int J = 0, Omega = 0;
  double mass_amu = 0;
  std::shared_ptr<const RadialGrid> grid;

  int n_bound = 0;
  std::vector<double> energies_GHz;
  Eigen::MatrixXd psi;   // N x K wavefunction values at grid points
  Eigen::MatrixXd coef;  // N x K sine-basis coefficients (for off-grid evaluation)
  std::vector<double> mean_R2_bohr2;
  std::vector<double> B_v_MHz;
  std::vector<double> R_outer_bohr;  // outermost classical turning point

  int levels() const { return static_cast<int>(energies_GHz.size()); }
  // wavefunction value at arbitrary R (0 outside the grid support)
  double eval(int level, double R_bohr) const;
};

// V_n(R) + hbar^2 (J(J+1) - Omega^2)/(2 m R^2) sampled on the grid, GHz.
std::vector<double> effective_potential(const PotentialCurve& curve, int J, int Omega,
                                        const RadialGrid& grid);

RadialSolution solve_channel(const PotentialCurve& curve, int J, int Omega,
                             std::shared_ptr<const RadialGrid> grid,
                             const SolveOptions& opts = {});

// Radial overlap <psi_a|psi_b> with the transition dipole taken constant
// (multiply by mu0 separately). Cross-grid overlaps evaluate the coarser
// function through its sine basis on the finer quadrature.
double franck_condon(const RadialSolution& a, int level_a, const RadialSolution& b,
                     int level_b);

// Overlap of one level of b against every retained level of a.
Eigen::VectorXd franck_condon_all(const RadialSolution& a, const RadialSolution& b,
                                  int level_b);

double rotational_constant(const RadialSolution& sol, int level);  // MHz

struct CalibrationTargets {
  double binding_MHz;  // positive
  double B_v_MHz;
};

struct CalibrationOptions {
  PotentialCurve::Kind kind = PotentialCurve::Kind::model_ground;
  double mass_amu = 43.4545902635;  // one half of the 87Rb atomic mass
  RadialGridSpec grid{0, 300.0, 4.0, 1.0, 0};  // bound levels only; box irrelevant
  int level_index = 2;  // designated bound level, counted from the bottom of the well
  double init_p1 = 0, init_p2 = 0;  // (c12, c6) or (c6x, c3); 0 = defaults
  int max_iter = 60;
  double tol_binding_MHz = 0.02;
  double tol_B_MHz = 0.005;
};

// Two-parameter root search that shapes a model curve until its designated
// weakly bound level matches the requested binding energy and rotational
// constant. Throws NumericsError for infeasible targets or non-convergence.
PotentialCurve calibrate_model_potential(const CalibrationTargets& targets,
                                         const CalibrationOptions& opts);

// Shipped reference constants (reproduced by the calibrated curves).
inline constexpr double kReducedMassAmu = 43.4545902635;
inline constexpr double kTargetBindingMHz = 764.0;   // designated ground-curve level
inline constexpr double kTargetBvMHz = 16.29;
inline constexpr int kTargetLevelIndex = 2;        // next-to-last level of the shipped well
inline constexpr double kIntermediateBindingMHz = 650.0;  // designated excited-curve level
inline constexpr double kIntermediateBvMHz = 8.35;
inline constexpr int kIntermediateLevelIndex = 3;

}  // namespace pasim::radial
