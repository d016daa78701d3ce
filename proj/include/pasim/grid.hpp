#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "pasim/potential.hpp"
#include "pasim/spline.hpp"

namespace pasim::radial {

// Parameters of the mapped radial grid. The point density follows the local
// de Broglie wavelength at energy E_cap above the asymptote (and the local
// decay scale inside the repulsive wall), so long-range wells are resolved
// with far fewer points than a uniform grid would need.
struct RadialGridSpec {
  double R_min_bohr = 0;    // 0 = place automatically inside the repulsive wall
  double R_max_bohr = 1000; // hard-wall box edge (continuum discretization)
  double beta = 4.0;        // points per local de Broglie wavelength (>= 2)
  double E_cap_GHz = 0;     // sampling headroom above threshold; 0 = automatic
  int N_override = 0;       // force the number of grid points
};

namespace detail {
struct OperatorCache;
}

// Mapped sine-DVR grid: x in (0,1) carries N collocation points; R(x) follows
// the accumulated local phase s(R) = integral k(R') dR'. The density profile
// is smoothed in s over a couple of wavelengths so the Jacobian stays
// resolvable by the basis. Wavefunctions obey hard-wall boundaries at R_min
// and R_max, so above-threshold eigenstates are box-discretized continuum
// states. All mapping derivatives come from one spline R(s), keeping the
// kinetic operator exactly consistent with the point placement.
struct RadialGrid {
  PotentialCurve curve;  // curve the mapping was generated from
  double mass_amu = 0;
  RadialGridSpec spec;   // resolved values (R_min, E_cap filled in)

  int N = 0;
  double dx = 0;               // 1/(N+1)
  std::vector<double> R;       // DVR point positions, bohr
  std::vector<double> jac;     // dR/dx at the points
  std::vector<double> w;       // quadrature weights for integrals over R
  double s_tot = 0;            // total accumulated phase, rad

  std::shared_ptr<const CubicSpline> map;  // R as a function of s

  double R_of_x(double x) const { return (*map)(x * s_tot); }
  double jacobian_of_x(double x) const { return s_tot * map->derivative(x * s_tot); }
  double djacobian_of_x(double x) const {
    return s_tot * s_tot * map->second_derivative(x * s_tot);
  }
  double x_of_R(double R_bohr) const;  // spline-consistent inverse

  std::vector<double> table_s, table_R;  // monotone mapping table (uniform s)

  std::shared_ptr<detail::OperatorCache> cache;  // lazily built operators
};

std::shared_ptr<const RadialGrid> build_mapped_grid(const PotentialCurve& curve,
                                                    double mass_amu,
                                                    const RadialGridSpec& spec);

namespace detail {

// Sine-basis matrices shared by every channel on one grid: the mapped kinetic
// operator and the 1/(2 m R^2) centrifugal kernel, both in hartree.
struct GridMatrices {
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd centrifugal;
};

struct OperatorCache {
  std::mutex mtx;
  std::shared_ptr<const GridMatrices> matrices;
  std::vector<std::pair<std::string, std::shared_ptr<const Eigen::MatrixXd>>> potentials;
};

std::shared_ptr<const GridMatrices> grid_matrices(const RadialGrid& grid);

// <chi_n| V |chi_m> for an arbitrary curve on this grid, hartree.
std::shared_ptr<const Eigen::MatrixXd> potential_matrix(const RadialGrid& grid,
                                                        const PotentialCurve& curve);

}  // namespace detail

}  // namespace pasim::radial
