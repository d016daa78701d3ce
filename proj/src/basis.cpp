#include "pasim/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pasim/errors.hpp"

namespace pasim::basis {

using angmom::AngularState;

std::shared_ptr<const RadialBundle> build_radial_bundle(
    const radial::PotentialCurve& ground, const radial::PotentialCurve& excited,
    double mass_amu, const BundleOptions& opts) {
  if (opts.J_max < 0) throw ValidationError("bundle: J_max must be non-negative");
  if (opts.n_box < 1) throw ValidationError("bundle: need at least one box state");

  auto bundle = std::make_shared<RadialBundle>();
  bundle->mass_amu = mass_amu;
  bundle->J_max = opts.J_max;
  bundle->n_box = opts.n_box;

  auto ggrid = radial::build_mapped_grid(ground, mass_amu, opts.grid);
  radial::RadialGridSpec xspec = opts.grid;
  xspec.R_min_bohr = 0;  // repulsive walls differ between the curves
  auto xgrid = radial::build_mapped_grid(excited, mass_amu, xspec);

  radial::SolveOptions gopts;
  gopts.max_box_count = opts.n_box;
  gopts.check_convergence = opts.check_convergence;
  bundle->ground_by_J.reserve(opts.J_max + 1);
  for (int J = 0; J <= opts.J_max; ++J) {
    radial::SolveOptions so = gopts;
    so.check_convergence = opts.check_convergence && J == 0;
    bundle->ground_by_J.push_back(radial::solve_channel(ground, J, 0, ggrid, so));
    if (bundle->ground_by_J.back().levels() < bundle->ground_by_J.back().n_bound + opts.n_box) {
      std::ostringstream os;
      os << "bundle: ground J=" << J << " produced only "
         << bundle->ground_by_J.back().levels() - bundle->ground_by_J.back().n_bound
         << " box states; raise the grid energy cap or R_max";
      throw ValidationError(os.str());
    }
  }

  radial::SolveOptions xopts;
  xopts.max_box_count = 0;
  xopts.check_convergence = opts.check_convergence;
  bundle->excited = radial::solve_channel(excited, 0, 0, xgrid, xopts);

  const auto& g0 = bundle->ground_by_J[0];
  if (g0.n_bound <= opts.target_level_index)
    throw ValidationError("bundle: ground curve has too few bound levels for the target");
  if (bundle->excited.n_bound <= opts.intermediate_level_index)
    throw ValidationError("bundle: excited curve has too few bound levels");
  bundle->target_level = opts.target_level_index;
  bundle->intermediate_level = opts.intermediate_level_index;
  bundle->binding_MHz = -g0.energies_GHz[bundle->target_level] * 1e3;
  bundle->binding_intermediate_MHz =
      -bundle->excited.energies_GHz[bundle->intermediate_level] * 1e3;
  bundle->B_target_MHz = g0.B_v_MHz[bundle->target_level];
  bundle->B_intermediate_MHz = bundle->excited.B_v_MHz[bundle->intermediate_level];

  bundle->fc_up.resize(opts.J_max + 1, opts.n_box);
  for (int J = 0; J <= opts.J_max; ++J) {
    const auto& sol = bundle->ground_by_J[J];
    const Eigen::VectorXd all =
        radial::franck_condon_all(sol, bundle->excited, bundle->intermediate_level);
    for (int n = 0; n < opts.n_box; ++n) bundle->fc_up(J, n) = all(sol.n_bound + n);
  }
  bundle->fc_down =
      radial::franck_condon(g0, bundle->target_level, bundle->excited, bundle->intermediate_level);
  return bundle;
}

namespace {

bool in_parity(int J, Parity p) { return (J % 2 == 0) == (p == Parity::even); }

}  // namespace

std::shared_ptr<const BasisSet> build_basis(std::shared_ptr<const RadialBundle> radial,
                                            int J_max, Parity parity) {
  if (!radial) throw ValidationError("build_basis: missing radial bundle");
  if (J_max > radial->J_max) {
    std::ostringstream os;
    os << "build_basis: no radial solution for scattering J=" << J_max
       << " (bundle holds J <= " << radial->J_max << ")";
    throw ValidationError(os.str());
  }
  bool any_scattering = false;
  for (int J = 0; J <= J_max; ++J) any_scattering |= in_parity(J, parity);
  if (!any_scattering)
    throw ValidationError(std::string("build_basis: no scattering J <= J_max in the ") +
                          name(parity) + " parity class");

  auto out = std::make_shared<BasisSet>();
  out->parity = parity;
  out->J_max = J_max;
  out->n_box = radial->n_box;
  out->radial = radial;

  const double bind_GHz = radial->binding_MHz * 1e-3;
  const double Bt_GHz = radial->B_target_MHz * 1e-3;
  const double Bi_GHz = radial->B_intermediate_MHz * 1e-3;

  for (int M = -(J_max + 1); M <= J_max + 1; ++M) {
    // scattering box levels, parity class, J <= J_max
    for (int J = std::abs(M); J <= J_max; ++J) {
      if (!in_parity(J, parity)) continue;
      const auto& sol = radial->ground_by_J[J];
      for (int n = 0; n < radial->n_box; ++n)
        out->levels.push_back({Manifold::scattering, n, AngularState(J, M, 0),
                               sol.energies_GHz[sol.n_bound + n], 0.0});
    }
    // intermediate ladder: dipole-reachable opposite parity up to J_max + 1
    for (int J = std::abs(M); J <= J_max + 1; ++J) {
      if (in_parity(J, parity)) continue;
      if (Bi_GHz * J * (J + 1) >= radial->binding_intermediate_MHz * 1e-3)
        continue;  // above the rotational barrier
      // reachable only if some scattering J' = J +- 1 with |M| <= J' exists
      const bool reach = (J - 1 >= std::abs(M) && J - 1 <= J_max && in_parity(J - 1, parity)) ||
                         (J + 1 <= J_max && in_parity(J + 1, parity));
      if (!reach) continue;
      out->levels.push_back({Manifold::intermediate, radial->intermediate_level,
                             AngularState(J, M, 0), Bi_GHz * J * (J + 1),
                             radial->B_intermediate_MHz});
    }
    // target ladder, parity class, J <= J_max. A rung exists only while the
    // J-resolved solve still binds the level (the rotational barrier strips
    // the rest) and while the rigid-rotor position stays within a third of
    // its own binding of the true per-J energy; near-threshold rungs fail
    // both ways and would otherwise sit at nonsense energies.
    for (int J = std::abs(M); J <= J_max; ++J) {
      if (!in_parity(J, parity)) continue;
      const auto& sol = radial->ground_by_J[J];
      if (sol.n_bound <= radial->target_level) continue;
      const double rigid_GHz = -bind_GHz + Bt_GHz * J * (J + 1);
      if (rigid_GHz >= 0) continue;
      if (std::abs(rigid_GHz - sol.energies_GHz[radial->target_level]) >
          std::abs(rigid_GHz) / 3.0)
        continue;
      out->levels.push_back({Manifold::target, radial->target_level, AngularState(J, M, 0),
                             rigid_GHz, radial->B_target_MHz});
    }
  }

  // deterministic order: M, manifold, J, radial index
  std::stable_sort(out->levels.begin(), out->levels.end(),
                   [](const ChannelLevel& a, const ChannelLevel& b) {
                     if (a.ang.M != b.ang.M) return a.ang.M < b.ang.M;
                     if (a.manifold != b.manifold) return a.manifold < b.manifold;
                     if (a.ang.J != b.ang.J) return a.ang.J < b.ang.J;
                     return a.radial_index < b.radial_index;
                   });
  return out;
}

HamiltonianModel assemble_hamiltonian(std::shared_ptr<const BasisSet> basis,
                                      const pulse::PulseTrain& train,
                                      const AssembleOptions& opts) {
  if (!basis) throw ValidationError("assemble_hamiltonian: missing basis");
  const auto& bundle = *basis->radial;
  if (bundle.fc_up.rows() < basis->J_max + 1 || bundle.fc_up.cols() < basis->n_box)
    throw ValidationError("assemble_hamiltonian: Franck-Condon table does not cover the basis");

  HamiltonianModel model;
  model.basis = basis;
  model.train = train;

  const int n = basis->size();
  model.diag_GHz.resize(n);
  model.chirped.assign(n, 0);
  model.manifold.resize(n);
  for (int i = 0; i < n; ++i) {
    model.diag_GHz[i] = basis->levels[i].energy_GHz;
    model.chirped[i] = basis->levels[i].manifold == Manifold::intermediate;
    model.manifold[i] = basis->levels[i].manifold;
  }

  // dipole couplings: scattering <-> intermediate and intermediate <-> target,
  // q = 0 (Omega-conserving), lab frame M-conserving
  for (int i = 0; i < n; ++i) {
    const auto& li = basis->levels[i];
    if (li.manifold != Manifold::intermediate) continue;
    for (int j = 0; j < n; ++j) {
      const auto& lj = basis->levels[j];
      if (lj.manifold == Manifold::intermediate) continue;
      if (lj.ang.M != li.ang.M || std::abs(lj.ang.J - li.ang.J) != 1) continue;
      double rot = opts.unit_rotational_factors
                       ? 1.0
                       : angmom::dipole_rotational_factor(li.ang, lj.ang, 0);
      if (rot == 0.0) continue;
      const double fc = (lj.manifold == Manifold::scattering)
                            ? bundle.fc_up(lj.ang.J, lj.radial_index)
                            : bundle.fc_down;
      const double coeff = rot * fc;
      if (std::abs(coeff) < 1e-15) continue;
      model.couplings.push_back({std::min(i, j), std::max(i, j), coeff});
    }
  }
  std::sort(model.couplings.begin(), model.couplings.end(),
            [](const Coupling& a, const Coupling& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });

  // cos^2(theta) pairs within each manifold (same M, |dJ| in {0, 2}); the
  // radial overlap factor is delta-like for the rigid-rotor bound manifolds
  // and computed between box states for the scattering manifold
  auto add_pairs = [&](Manifold m, std::vector<Cos2Pair>& out) {
    for (int i = 0; i < n; ++i) {
      const auto& li = basis->levels[i];
      if (li.manifold != m) continue;
      for (int j = i; j < n; ++j) {
        const auto& lj = basis->levels[j];
        if (lj.manifold != m || lj.ang.M != li.ang.M) continue;
        if (std::abs(lj.ang.J - li.ang.J) > 2) continue;
        const double ang = angmom::cos2theta_element(li.ang, lj.ang);
        if (ang == 0.0) continue;
        double radial_overlap = 1.0;
        if (m == Manifold::scattering) {
          radial_overlap = radial::franck_condon(bundle.ground_by_J[li.ang.J],
                                                 bundle.ground_by_J[li.ang.J].n_bound + li.radial_index,
                                                 bundle.ground_by_J[lj.ang.J],
                                                 bundle.ground_by_J[lj.ang.J].n_bound + lj.radial_index);
        } else if (li.radial_index != lj.radial_index) {
          radial_overlap = 0.0;
        }
        const double v = ang * radial_overlap;
        if (std::abs(v) > 1e-14) out.push_back({i, j, v});
      }
    }
  };
  add_pairs(Manifold::scattering, model.cos2_scattering);
  add_pairs(Manifold::intermediate, model.cos2_intermediate);
  add_pairs(Manifold::target, model.cos2_target);
  return model;
}

}  // namespace pasim::basis
