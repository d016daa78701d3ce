#include "pasim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::radial {

namespace {

namespace cn = pasim::constants;

// innermost radius where the repulsive wall reaches V_stop
double auto_R_min(const PotentialCurve& curve, double V_stop_GHz) {
  double lo = std::max(curve.r_support_min(), 1e-2);
  double hi = curve.equilibrium_R();
  if (curve.value(lo) <= V_stop_GHz) return lo;  // wall never that high in support
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (curve.value(mid) > V_stop_GHz ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// local sampling energy: de Broglie scale of retained states in the allowed
// region, decay scale of the deepest state inside the wall
double profile_GHz(double V_GHz, double E_cap_GHz, double depth_GHz) {
  return V_GHz <= 0 ? E_cap_GHz - V_GHz : E_cap_GHz + 2.0 * V_GHz + depth_GHz;
}

}  // namespace

double RadialGrid::x_of_R(double R_bohr) const {
  if (R_bohr <= table_R.front()) return 0.0;
  if (R_bohr >= table_R.back()) return 1.0;
  const auto it = std::upper_bound(table_R.begin(), table_R.end(), R_bohr);
  const size_t i = static_cast<size_t>(it - table_R.begin()) - 1;
  const double f = (R_bohr - table_R[i]) / (table_R[i + 1] - table_R[i]);
  double s = table_s[i] + f * (table_s[i + 1] - table_s[i]);
  for (int k = 0; k < 3; ++k) {  // polish against the spline
    const double dR = (*map)(s)-R_bohr;
    s -= dR / map->derivative(s);
  }
  return std::clamp(s / s_tot, 0.0, 1.0);
}

std::shared_ptr<const RadialGrid> build_mapped_grid(const PotentialCurve& curve,
                                                    double mass_amu,
                                                    const RadialGridSpec& spec_in) {
  if (mass_amu <= 0) throw ValidationError("grid: mass must be positive");
  if (spec_in.beta < 2.0) throw ValidationError("grid: beta must be >= 2");
  auto grid = std::make_shared<RadialGrid>();
  grid->curve = curve;
  grid->mass_amu = mass_amu;
  RadialGridSpec spec = spec_in;

  const double depth = curve.depth_GHz();
  if (spec.E_cap_GHz <= 0) spec.E_cap_GHz = std::max(1.0, 0.05 * depth);
  if (spec.R_min_bohr <= 0) {
    const double V_stop = 25.0 * std::max(depth, spec.E_cap_GHz);
    spec.R_min_bohr = auto_R_min(curve, V_stop);
  }
  spec.R_min_bohr = std::max(spec.R_min_bohr, curve.r_support_min());
  spec.R_max_bohr = std::min(spec.R_max_bohr, curve.r_support_max());
  if (!(spec.R_max_bohr > spec.R_min_bohr))
    throw ValidationError("grid: R_max must exceed R_min");
  grid->spec = spec;

  const double mass_au = mass_amu * cn::amu_to_me;

  // raw accumulated phase on a log-spaced dense sampling of R
  const int nd = 24000;
  std::vector<double> Rd(nd), s_raw(nd);
  const double lr0 = std::log(spec.R_min_bohr), lr1 = std::log(spec.R_max_bohr);
  double s = 0.0, k_prev = 0.0;
  for (int i = 0; i < nd; ++i) {
    Rd[i] = std::exp(lr0 + (lr1 - lr0) * i / double(nd - 1));
    const double g = profile_GHz(curve.value(Rd[i]), spec.E_cap_GHz, depth);
    const double k = std::sqrt(2.0 * mass_au * g * cn::GHz_to_hartree);
    if (i > 0) s += 0.5 * (k + k_prev) * (Rd[i] - Rd[i - 1]);
    s_raw[i] = s;
    k_prev = k;
  }

  // resample ln k on uniform s and smooth over a couple of local wavelengths
  // so the Jacobian has no features the sine basis cannot resolve
  const int ns = 8192;
  const double ds = s / (ns - 1);
  std::vector<double> lnk(ns);
  {
    size_t j = 0;
    for (int i = 0; i < ns; ++i) {
      const double si = i * ds;
      while (j + 2 < s_raw.size() && s_raw[j + 1] < si) ++j;
      const double f = (si - s_raw[j]) / std::max(s_raw[j + 1] - s_raw[j], 1e-300);
      const double R = Rd[j] + std::min(std::max(f, 0.0), 1.0) * (Rd[j + 1] - Rd[j]);
      const double g = profile_GHz(curve.value(R), spec.E_cap_GHz, depth);
      lnk[i] = 0.5 * std::log(2.0 * mass_au * g * cn::GHz_to_hartree);
    }
  }
  // four box-blur passes approximate a Gaussian of width sigma_s
  const double sigma_s = std::min(2.0 * cn::two_pi, s / 8.0);
  std::vector<double> lnk_sm = lnk;
  {
    const int half = std::max(1, int(std::lround(0.866 * sigma_s / ds)));
    std::vector<double> tmp(ns);
    for (int pass = 0; pass < 4; ++pass) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) acc += lnk_sm[std::clamp(k, 0, ns - 1)];
      const double inv = 1.0 / (2 * half + 1);
      for (int i = 0; i < ns; ++i) {
        tmp[i] = acc * inv;
        acc += lnk_sm[std::clamp(i + half + 1, 0, ns - 1)] -
               lnk_sm[std::clamp(i - half, 0, ns - 1)];
      }
      lnk_sm.swap(tmp);
    }
  }

  // rebuild R(s) from the smoothed density and rescale onto [R_min, R_max]
  std::vector<double> R_fine(ns);
  double R_acc = spec.R_min_bohr;
  for (int i = 0; i < ns; ++i) {
    if (i > 0)
      R_acc += 0.5 * (std::exp(-lnk_sm[i]) + std::exp(-lnk_sm[i - 1])) * ds;
    R_fine[i] = R_acc;
  }
  const double scale = (spec.R_max_bohr - spec.R_min_bohr) / (R_fine.back() - R_fine.front());
  for (int i = 0; i < ns; ++i)
    R_fine[i] = spec.R_min_bohr + (R_fine[i] - spec.R_min_bohr) * scale;

  // the map spline lives on coarse knots (several per smoothing width) so its
  // piecewise structure stays far below the quadrature resolution
  const int n_knots =
      std::clamp(int(std::lround(4.0 * (ns - 1) * ds / sigma_s)), 48, 512);
  std::vector<double> su(n_knots), Ru(n_knots);
  for (int k = 0; k < n_knots; ++k) {
    const int i = int(std::lround(double(k) * (ns - 1) / (n_knots - 1)));
    su[k] = i * ds;
    Ru[k] = R_fine[i];
  }

  grid->s_tot = su.back();
  grid->table_s = su;
  grid->table_R = Ru;
  grid->map = std::make_shared<CubicSpline>(std::move(su), std::move(Ru));

  int N = spec.N_override;
  if (N <= 0)
    N = std::max(64, int(std::ceil(spec.beta * grid->s_tot / cn::two_pi * 1.45)) + 8);
  grid->N = N;
  grid->dx = 1.0 / (N + 1);

  grid->R.resize(N);
  grid->jac.resize(N);
  grid->w.resize(N);
  for (int i = 0; i < N; ++i) {
    const double x = (i + 1) * grid->dx;
    grid->R[i] = grid->R_of_x(x);
    grid->jac[i] = grid->jacobian_of_x(x);
    grid->w[i] = grid->jac[i] * grid->dx;
  }
  grid->cache = std::make_shared<detail::OperatorCache>();
  return grid;
}

namespace detail {

namespace {

// Fourier moments of an envelope: out[k] = Simpson integral of
// env(x) cos(k pi x) dx (and the sine variant) for k = 0..K, evaluated on a
// heavily oversampled uniform quadrature so the moments are exact to
// roundoff. Every sine-basis matrix element is a short combination of these.
std::vector<double> cos_moments(const std::vector<double>& env, int K, double dxq) {
  const int M = static_cast<int>(env.size());
  std::vector<double> out(K + 1, 0.0);
  for (int q = 0; q < M; ++q) {
    const double x = q * dxq;
    double wq = (q == 0 || q == M - 1) ? dxq / 3.0
                                       : (q % 2 ? 4.0 * dxq / 3.0 : 2.0 * dxq / 3.0);
    wq *= env[q];
    const std::complex<double> step(std::cos(cn::pi * x), std::sin(cn::pi * x));
    std::complex<double> z(1.0, 0.0);
    for (int k = 0; k <= K; ++k) {
      out[k] += wq * z.real();
      z *= step;
    }
  }
  return out;
}

std::vector<double> sin_moments(const std::vector<double>& env, int K, double dxq) {
  const int M = static_cast<int>(env.size());
  std::vector<double> out(K + 1, 0.0);
  for (int q = 0; q < M; ++q) {
    const double x = q * dxq;
    double wq = (q == 0 || q == M - 1) ? dxq / 3.0
                                       : (q % 2 ? 4.0 * dxq / 3.0 : 2.0 * dxq / 3.0);
    wq *= env[q];
    const std::complex<double> step(std::cos(cn::pi * x), std::sin(cn::pi * x));
    std::complex<double> z(1.0, 0.0);
    for (int k = 0; k <= K; ++k) {
      out[k] += wq * z.imag();
      z *= step;
    }
  }
  return out;
}

int quad_points(int N) {
  int M = 32 * (N + 1) + 1;
  if (M % 2 == 0) ++M;  // Simpson needs an odd count
  return M;
}

// env(x) = f(x) assembled into <chi_n| f |chi_m> via 2 sin sin = cos(d)-cos(s)
Eigen::MatrixXd multiplicative_matrix(const std::vector<double>& env, int N, double dxq) {
  const auto C = cos_moments(env, 2 * N, dxq);
  Eigen::MatrixXd out(N, N);
  for (int n = 1; n <= N; ++n)
    for (int m = 1; m <= n; ++m) {
      const double v = C[n - m] - C[n + m];
      out(n - 1, m - 1) = v;
      out(m - 1, n - 1) = v;
    }
  return out;
}

}  // namespace

std::shared_ptr<const GridMatrices> grid_matrices(const RadialGrid& grid) {
  auto& cache = *grid.cache;
  {
    std::lock_guard<std::mutex> lock(cache.mtx);
    if (cache.matrices) return cache.matrices;
  }

  const int N = grid.N;
  const int M = quad_points(N);
  const double dxq = 1.0 / (M - 1);
  const double mass_au = grid.mass_amu * cn::amu_to_me;

  // kinetic envelopes: with a = J^{-1/2}, b = a J'/(2J), w = 1/(2 m J):
  //   T_nm = [ n m pi^2 (P_|d| + P_s) - s pi Q_s + d pi Q_d + S_|d| - S_s ] / 2
  // where d = n - m, s = n + m and P, Q, S are the cos/sin moments of
  // 2 w a^2, 2 w a b and 2 w b^2.
  std::vector<double> envP(M), envQ(M), envS(M), envC(M);
  for (int q = 0; q < M; ++q) {
    const double x = q * dxq;
    const double R = grid.R_of_x(x);
    const double J = grid.jacobian_of_x(x);
    const double Jp = grid.djacobian_of_x(x);
    const double w = 1.0 / (2.0 * mass_au * J);
    const double a2 = 1.0 / J;
    const double ab = Jp / (2.0 * J * J);
    const double b2 = Jp * Jp / (4.0 * J * J * J);
    envP[q] = 2.0 * w * a2;
    envQ[q] = 2.0 * w * ab;
    envS[q] = 2.0 * w * b2;
    envC[q] = 1.0 / (2.0 * mass_au * R * R);
  }
  const auto P = cos_moments(envP, 2 * N, dxq);
  const auto Q = sin_moments(envQ, 2 * N, dxq);
  const auto S = cos_moments(envS, 2 * N, dxq);

  auto out = std::make_shared<GridMatrices>();
  out->kinetic.resize(N, N);
  for (int n = 1; n <= N; ++n)
    for (int m = 1; m <= n; ++m) {
      const int d = n - m, s = n + m;
      const double v = 0.5 * (n * m * cn::pi * cn::pi * (P[d] + P[s]) -
                              s * cn::pi * Q[s] + d * cn::pi * Q[d] + S[d] - S[s]);
      out->kinetic(n - 1, m - 1) = v;
      out->kinetic(m - 1, n - 1) = v;
    }
  out->centrifugal = multiplicative_matrix(envC, N, dxq);

  std::lock_guard<std::mutex> lock(cache.mtx);
  if (!cache.matrices) cache.matrices = out;
  return cache.matrices;
}

std::shared_ptr<const Eigen::MatrixXd> potential_matrix(const RadialGrid& grid,
                                                        const PotentialCurve& curve) {
  auto& cache = *grid.cache;
  const std::string key = curve.fingerprint();
  {
    std::lock_guard<std::mutex> lock(cache.mtx);
    for (const auto& [k, v] : cache.potentials)
      if (k == key) return v;
  }

  const int N = grid.N;
  const int M = quad_points(N);
  const double dxq = 1.0 / (M - 1);
  std::vector<double> env(M);
  for (int q = 0; q < M; ++q)
    env[q] = curve.value(grid.R_of_x(q * dxq)) * cn::GHz_to_hartree;
  auto out = std::make_shared<Eigen::MatrixXd>(multiplicative_matrix(env, N, dxq));

  std::lock_guard<std::mutex> lock(cache.mtx);
  cache.potentials.emplace_back(key, out);
  return cache.potentials.back().second;
}

}  // namespace detail

}  // namespace pasim::radial
