#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pasim/basis.hpp"

namespace pasim::propagate {

// Complex amplitudes over a Hamiltonian model's level list.
struct StateVector {
  Eigen::VectorXcd amps;
  double t_ns = 0;
};

struct PropagateOptions {
  double rtol = 1e-10;  // local error per adaptive step, relative
  double atol = 1e-12;
  double sample_stride_ns = 0.25;  // shrunk automatically to resolve the
                                   // fastest retained beat by >= 8 points
  bool store_states = false;
  bool norm_guard = true;
  double norm_tol_per_ns = 1e-8;
};

struct Sample {
  double norm = 0;
  double pop_scattering = 0, pop_intermediate = 0, pop_target = 0;
  // numerators of the projected <cos^2 theta>; the matching population is
  // the denominator
  double cos2_scattering = 0, cos2_intermediate = 0, cos2_target = 0;
};

struct Trajectory {
  std::vector<double> t_ns;
  std::vector<Sample> samples;
  std::vector<Eigen::VectorXcd> states;  // filled when store_states is set
  StateVector final_state;
};

// Unitary evolution under the rotating-frame model between t0 and t1. The
// field acts only inside the train's windows; across gaps the amplitudes
// advance by exact diagonal phases. Throws NumericsError on step-size
// underflow or norm drift beyond the contract.
Trajectory propagate(const StateVector& initial, const basis::HamiltonianModel& model,
                     double t0_ns, double t1_ns, const PropagateOptions& opts = {});

// Diagonal-phase evolution only (no integrator error).
Trajectory free_evolve(const StateVector& initial, const basis::HamiltonianModel& model,
                       double duration_ns, const PropagateOptions& opts = {});

// Batched variant: each column of `initials` evolves independently under the
// same model; the integrator error control spans all columns, so results are
// identical whether columns run together or alone to within the tolerance.
std::vector<Trajectory> propagate_multi(const Eigen::MatrixXcd& initials,
                                        const basis::HamiltonianModel& model,
                                        double t0_ns, double t1_ns,
                                        const PropagateOptions& opts = {});

// Restriction of a model to one lab-frame projection M (the Hamiltonian is
// block diagonal in M). parent_index maps block slots to model levels.
struct MBlock {
  basis::HamiltonianModel model;
  std::vector<int> parent_index;
  int M = 0;
};

std::vector<MBlock> split_m_blocks(const basis::HamiltonianModel& model);

}  // namespace pasim::propagate
