#include "pasim/radial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <cstdio>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::radial {

namespace cn = pasim::constants;

std::vector<double> effective_potential(const PotentialCurve& curve, int J, int Omega,
                                        const RadialGrid& grid) {
  if (std::abs(Omega) > J)
    throw std::invalid_argument("effective_potential: |Omega| must not exceed J");
  const double lambda = double(J) * (J + 1) - double(Omega) * Omega;
  std::vector<double> v(grid.R.size());
  for (size_t i = 0; i < grid.R.size(); ++i) {
    const double cent_MHz =
        cn::rot_prefactor_MHz_amu_bohr2 * lambda / (grid.mass_amu * grid.R[i] * grid.R[i]);
    v[i] = curve.value(grid.R[i]) + cent_MHz * 1e-3;
  }
  return v;
}

namespace {

RadialSolution solve_impl(const PotentialCurve& curve, int J, int Omega,
                          std::shared_ptr<const RadialGrid> grid, const SolveOptions& opts) {
  const auto mats = detail::grid_matrices(*grid);
  const auto vmat = detail::potential_matrix(*grid, curve);
  const double lambda = double(J) * (J + 1) - double(Omega) * Omega;

  Eigen::MatrixXd H = mats->kinetic + *vmat;
  if (lambda != 0.0) H.noalias() += lambda * mats->centrifugal;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw NumericsError("solve_channel: eigensolver failed");

  const int N = grid->N;
  const Eigen::VectorXd evals = es.eigenvalues();

  std::vector<int> keep;
  int n_bound = 0;
  for (int k = 0; k < N; ++k) {
    const double E_GHz = evals(k) * cn::hartree_to_GHz;
    if (opts.keep_all) {
      keep.push_back(k);
      if (E_GHz < opts.bound_threshold_GHz) ++n_bound;
      continue;
    }
    if (E_GHz < opts.bound_threshold_GHz) {
      keep.push_back(k);
      ++n_bound;
    } else {
      const int n_box = static_cast<int>(keep.size()) - n_bound;
      if (n_box >= opts.max_box_count) break;
      if (opts.E_box_cap_GHz > 0 && E_GHz > opts.E_box_cap_GHz) break;
      keep.push_back(k);
    }
  }

  RadialSolution sol;
  {
    std::ostringstream os;
    os << (curve.kind() == PotentialCurve::Kind::model_excited ? "excited" : "ground")
       << " J=" << J << " Omega=" << Omega;
    sol.label = os.str();
  }
  sol.J = J;
  sol.Omega = Omega;
  sol.mass_amu = grid->mass_amu;
  sol.grid = grid;
  sol.n_bound = n_bound;

  const int K = static_cast<int>(keep.size());
  sol.energies_GHz.resize(K);
  sol.coef.resize(N, K);
  for (int c = 0; c < K; ++c) {
    sol.energies_GHz[c] = evals(keep[c]) * cn::hartree_to_GHz;
    sol.coef.col(c) = es.eigenvectors().col(keep[c]);
  }

  // values on the grid: psi(R_i) = sum_n c_n chi_n(x_i) / sqrt(jac_i)
  Eigen::MatrixXd X(N, N);
  for (int i = 0; i < N; ++i) {
    const double x = (i + 1) * grid->dx;
    const std::complex<double> step(std::cos(cn::pi * x), std::sin(cn::pi * x));
    std::complex<double> z = step;
    for (int n = 0; n < N; ++n) {
      X(i, n) = std::sqrt(2.0) * z.imag();
      z *= step;
    }
  }
  sol.psi = X * sol.coef;
  for (int i = 0; i < N; ++i) sol.psi.row(i) /= std::sqrt(grid->jac[i]);

  // deterministic sign: largest-amplitude point positive
  for (int c = 0; c < K; ++c) {
    int imax = 0;
    sol.psi.col(c).cwiseAbs().maxCoeff(&imax);
    if (sol.psi(imax, c) < 0) {
      sol.psi.col(c) *= -1.0;
      sol.coef.col(c) *= -1.0;
    }
  }

  const auto veff = effective_potential(curve, J, Omega, *grid);
  sol.mean_R2_bohr2.resize(K);
  sol.B_v_MHz.resize(K);
  sol.R_outer_bohr.resize(K);
  for (int c = 0; c < K; ++c) {
    double r2 = 0.0;
    for (int i = 0; i < N; ++i)
      r2 += sol.psi(i, c) * sol.psi(i, c) * grid->R[i] * grid->R[i] * grid->w[i];
    sol.mean_R2_bohr2[c] = r2;
    sol.B_v_MHz[c] = cn::rot_prefactor_MHz_amu_bohr2 / (grid->mass_amu * r2);
    double r_out = grid->R.back();
    for (int i = N - 1; i >= 0; --i) {
      if (veff[i] <= sol.energies_GHz[c]) { r_out = grid->R[i]; break; }
    }
    sol.R_outer_bohr[c] = r_out;
  }
  return sol;
}

}  // namespace

RadialSolution solve_channel(const PotentialCurve& curve, int J, int Omega,
                             std::shared_ptr<const RadialGrid> grid,
                             const SolveOptions& opts) {
  if (std::abs(Omega) > J)
    throw std::invalid_argument("solve_channel: |Omega| must not exceed J");
  RadialSolution sol = solve_impl(curve, J, Omega, grid, opts);

  if (opts.check_convergence) {
    RadialGridSpec fine = grid->spec;
    fine.N_override = 2 * grid->N;
    auto grid2 = build_mapped_grid(curve, grid->mass_amu, fine);
    SolveOptions o2 = opts;
    o2.check_convergence = false;
    const RadialSolution ref = solve_impl(curve, J, Omega, grid2, o2);
    for (int c = 0; c < sol.n_bound && c < ref.n_bound; ++c) {
      const double dE_MHz = std::abs(sol.energies_GHz[c] - ref.energies_GHz[c]) * 1e3;
      if (dE_MHz > opts.convergence_tol_MHz) {
        std::ostringstream os;
        os << "solve_channel(" << sol.label << "): bound level " << c << " moved "
           << dE_MHz << " MHz when the grid density was doubled"
           << " (tolerance " << opts.convergence_tol_MHz
           << " MHz); raise grid beta or E_cap";
        throw NumericsError(os.str());
      }
    }
    if (sol.n_bound != ref.n_bound) {
      std::ostringstream os;
      os << "solve_channel(" << sol.label << "): bound-state count changed ("
         << sol.n_bound << " -> " << ref.n_bound << ") when the grid density was doubled";
      throw NumericsError(os.str());
    }
  }
  return sol;
}

double RadialSolution::eval(int level, double R_bohr) const {
  const auto& g = *grid;
  if (R_bohr <= g.table_R.front() || R_bohr >= g.table_R.back()) return 0.0;
  const double x = g.x_of_R(R_bohr);
  const std::complex<double> step(std::cos(cn::pi * x), std::sin(cn::pi * x));
  std::complex<double> z = step;
  double phi = 0.0;
  const auto c = coef.col(level);
  for (int n = 0; n < g.N; ++n) {
    phi += c(n) * z.imag();
    z *= step;
  }
  phi *= std::sqrt(2.0);
  return phi / std::sqrt(g.jacobian_of_x(x));
}

Eigen::VectorXd franck_condon_all(const RadialSolution& a, const RadialSolution& b,
                                  int level_b) {
  if (level_b < 0 || level_b >= b.levels())
    throw std::invalid_argument("franck_condon: level index out of range");
  const int N = a.grid->N;
  Eigen::VectorXd other(N);
  if (a.grid == b.grid) {
    other = b.psi.col(level_b);
  } else {
    for (int i = 0; i < N; ++i) other(i) = b.eval(level_b, a.grid->R[i]);
  }
  for (int i = 0; i < N; ++i) other(i) *= a.grid->w[i];
  return a.psi.transpose() * other;
}

double franck_condon(const RadialSolution& a, int level_a, const RadialSolution& b,
                     int level_b) {
  if (level_a < 0 || level_a >= a.levels() || level_b < 0 || level_b >= b.levels())
    throw std::invalid_argument("franck_condon: level index out of range");
  // integrate on the finer quadrature
  const RadialSolution& fine = (a.grid->N >= b.grid->N) ? a : b;
  const RadialSolution& coarse = (a.grid->N >= b.grid->N) ? b : a;
  const int lf = (&fine == &a) ? level_a : level_b;
  const int lc = (&fine == &a) ? level_b : level_a;
  const int N = fine.grid->N;
  double acc = 0.0;
  if (fine.grid == coarse.grid) {
    for (int i = 0; i < N; ++i)
      acc += fine.psi(i, lf) * coarse.psi(i, lc) * fine.grid->w[i];
  } else {
    for (int i = 0; i < N; ++i)
      acc += fine.psi(i, lf) * coarse.eval(lc, fine.grid->R[i]) * fine.grid->w[i];
  }
  return acc;
}

double rotational_constant(const RadialSolution& sol, int level) {
  if (level < 0 || level >= sol.levels())
    throw std::invalid_argument("rotational_constant: level index out of range");
  return sol.B_v_MHz[level];
}

namespace {

PotentialCurve make_curve(PotentialCurve::Kind kind, double p1, double p2) {
  return kind == PotentialCurve::Kind::model_ground ? make_model_ground(p1, p2)
                                                    : make_model_excited(p1, p2);
}


}  // namespace

PotentialCurve calibrate_model_potential(const CalibrationTargets& targets,
                                         const CalibrationOptions& opts_in) {
  CalibrationOptions o = opts_in;
  if (targets.binding_MHz <= 0 || targets.B_v_MHz <= 0)
    throw ValidationError("calibration: targets must be positive");
  if (o.init_p1 <= 0 || o.init_p2 <= 0) {
    if (o.kind == PotentialCurve::Kind::model_ground) {
      o.init_p1 = 1.2e19;   // c12
      o.init_p2 = 3.1e10;   // c6
    } else {
      o.init_p1 = 6.6e9;    // c6x
      o.init_p2 = 6.3e5;    // c3
    }
  }

  // feasibility: B_v cannot exceed the rigid-rotor constant at the inner wall
  {
    const PotentialCurve guess = make_curve(o.kind, o.init_p1, o.init_p2);
    auto g = build_mapped_grid(guess, o.mass_amu, o.grid);
    const double B_max =
        cn::rot_prefactor_MHz_amu_bohr2 / (o.mass_amu * g->spec.R_min_bohr * g->spec.R_min_bohr);
    if (targets.B_v_MHz > B_max) {
      std::ostringstream os;
      os << "calibration: target B_v = " << targets.B_v_MHz
         << " MHz exceeds the rigid-rotor bound " << B_max
         << " MHz set by the repulsive wall at R = " << g->spec.R_min_bohr << " bohr";
      throw NumericsError(os.str());
    }
  }

  // Nested 1D root search. The repulsive coefficient p1 controls the well
  // depth: the designated (from-bottom) level's binding rises monotonically
  // as p1 shrinks. The long-range coefficient p2 sets the outer turning
  // point, so B_v at fixed binding falls monotonically as p2 grows.
  struct Obs {
    double bind = 0, B = 0;
    int nb = -1;
  };
  auto measure = [&](double a, double b) -> Obs {
    const PotentialCurve c = make_curve(o.kind, std::exp(a), std::exp(b));
    auto grid = build_mapped_grid(c, o.mass_amu, o.grid);
    SolveOptions so;
    so.max_box_count = 0;
    const RadialSolution sol = solve_impl(c, 0, 0, grid, so);
    if (sol.n_bound <= o.level_index) return {};
    return {-sol.energies_GHz[o.level_index] * 1e3, sol.B_v_MHz[o.level_index],
            sol.n_bound};
  };

  // binding(target) root in p1 at fixed p2; returns the solved lp1
  auto solve_binding = [&](double lp2, double lp1_hint) {
    double x = lp1_hint;
    Obs ocur = measure(x, lp2);
    for (int k = 0; ocur.nb < 0 && k < 40; ++k) {  // walk into a region with levels
      x -= 0.2;
      ocur = measure(x, lp2);
    }
    if (ocur.nb < 0) throw NumericsError("calibration: no region with enough bound levels");
    const double step = 0.05;
    double xa = x;
    Obs oa = ocur;
    for (int k = 0; k < 600; ++k) {
#ifdef PASIM_CALIBRATION_TRACE
      std::fprintf(stderr, "[walk %3d] p1=%.4e bind=%.2f nb=%d\n", k, std::exp(xa),
                   oa.bind, oa.nb);
#endif
      if (std::abs(oa.bind - targets.binding_MHz) <= o.tol_binding_MHz) return xa;
      const double dir = (oa.bind < targets.binding_MHz) ? -step : step;
      const double xb = xa + dir;
      const Obs ob = measure(xb, lp2);
      if (ob.nb < 0)
        throw NumericsError(
            "calibration: designated level left the well during the root search");
      if ((oa.bind - targets.binding_MHz) * (ob.bind - targets.binding_MHz) < 0) {
        double lo = xa, hi = xb;
        double flo = oa.bind - targets.binding_MHz;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const Obs om = measure(mid, lp2);
          const double fm = om.bind - targets.binding_MHz;
          if (std::abs(fm) <= o.tol_binding_MHz) return mid;
          if (flo * fm <= 0) {
            hi = mid;
          } else {
            lo = mid;
            flo = fm;
          }
        }
        return 0.5 * (lo + hi);
      }
      xa = xb;
      oa = ob;
    }
    throw NumericsError("calibration: root search failed to bracket the binding target");
  };

  double lp2 = std::log(o.init_p2);
  double lp1 = std::log(o.init_p1);
  auto B_at = [&](double lp2v) {
    lp1 = solve_binding(lp2v, lp1);  // warm start from the previous solution
    const Obs obs = measure(lp1, lp2v);
#ifdef PASIM_CALIBRATION_TRACE
    std::fprintf(stderr, "[calib] p2=%.6e p1=%.6e bind=%.3f B=%.5f nb=%d\n",
                 std::exp(lp2v), std::exp(lp1), obs.bind, obs.B, obs.nb);
#endif
    return obs.B;
  };

  double fa = B_at(lp2) - targets.B_v_MHz;
  if (std::abs(fa) <= o.tol_B_MHz) return make_curve(o.kind, std::exp(lp1), std::exp(lp2));
  // B falls as p2 grows; walk to bracket, then regula falsi (Illinois)
  const double ostep = (fa > 0) ? 0.25 : -0.25;
  double a2 = lp2, b2 = lp2, fb = fa;
  for (int k = 0; k < 80 && fa * fb > 0; ++k) {
    a2 = b2;
    fa = fb;
    b2 += ostep;
    fb = B_at(b2) - targets.B_v_MHz;
  }
  if (fa * fb > 0)
    throw NumericsError("calibration: root search failed to bracket the B_v target");
  for (int it = 0; it < o.max_iter; ++it) {
    const double mid = (a2 * fb - b2 * fa) / (fb - fa);
    const double fm = B_at(mid) - targets.B_v_MHz;
    if (std::abs(fm) <= o.tol_B_MHz)
      return make_curve(o.kind, std::exp(lp1), std::exp(mid));
    if (fa * fm < 0) {
      b2 = mid;
      fb = fm;
      fa *= 0.5;
    } else {
      a2 = mid;
      fa = fm;
      fb *= 0.5;
    }
  }
  throw NumericsError("calibration: did not converge within the iteration limit");
}

}  // namespace pasim::radial
