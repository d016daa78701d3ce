#include "pasim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::ensemble {

namespace cn = pasim::constants;
using basis::Manifold;
using basis::Parity;
using propagate::Trajectory;

ThermalSelection thermal_initial_states(const basis::BasisSet& bs, const EnsembleSpec& spec) {
  if (spec.temperature_uK <= 0)
    throw ValidationError("thermal_initial_states: temperature must be positive");
  const double kT_GHz = spec.temperature_uK * cn::kB_MHz_per_uK * 1e-3;

  auto is_localized = [&](const basis::ChannelLevel& l) {
    if (!spec.exclude_localized_initial) return false;
    const auto& sol = bs.radial->ground_by_J[l.ang.J];
    const double R_max = sol.grid->spec.R_max_bohr;
    const double r2 = sol.mean_R2_bohr2[sol.n_bound + l.radial_index];
    return r2 < spec.localized_R2_fraction * R_max * R_max;
  };

  ThermalSelection out;
  double E_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < bs.size(); ++i)
    if (bs.levels[i].manifold == Manifold::scattering && !is_localized(bs.levels[i]))
      E_min = std::min(E_min, bs.levels[i].energy_GHz);
  double Z = 0;
  for (int i = 0; i < bs.size(); ++i) {
    const auto& l = bs.levels[i];
    if (l.manifold != Manifold::scattering || is_localized(l)) continue;
    const double w = std::exp(-(l.energy_GHz - E_min) / kT_GHz);
    Z += w;
    out.members.push_back({i, l.ang.J, l.ang.M, l.radial_index, w});
  }
  if (out.members.empty())
    throw ValidationError("thermal_initial_states: basis holds no scattering levels");

  // estimate the thermal weight beyond the box cap by extending each (J, M)
  // ladder with the free-box n^2 scaling
  double Z_beyond = 0;
  {
    std::map<std::pair<int, int>, std::pair<double, int>> tops;  // (J,M) -> (E_top, n_top)
    for (const auto& m : out.members) {
      auto& t = tops[{m.J, m.M}];
      const double E = bs.levels[m.level_index].energy_GHz;
      if (m.box + 1 > t.second) t = {E, m.box + 1};
    }
    for (const auto& [jm, t] : tops) {
      const auto [E_top, n_top] = t;
      if (E_top <= 0 || n_top < 1) continue;
      for (int n = n_top + 1; n <= 8 * n_top; ++n) {
        const double E = E_top * double(n) * n / (double(n_top) * n_top);
        if (E > 30.0 * kT_GHz) break;
        Z_beyond += std::exp(-E / kT_GHz);
      }
    }
  }
  out.truncated_fraction = Z_beyond / (Z + Z_beyond);
  out.truncation_warning = out.truncated_fraction > spec.truncation_warn_fraction;
  if (out.truncation_warning)
    std::fprintf(stderr,
                 "[pasim] warning: box cap truncates %.2f%% of the thermal weight; "
                 "raise the box-state count\n",
                 100.0 * out.truncated_fraction);

  for (auto& m : out.members) m.weight /= Z;
  // drop negligible members, then renormalize so weights again sum to one
  const double floor = spec.member_weight_floor;
  double kept = 0;
  std::vector<InitialMember> keep;
  for (const auto& m : out.members)
    if (m.weight >= floor) {
      keep.push_back(m);
      kept += m.weight;
    }
  for (auto& m : keep) m.weight /= kept;
  out.members = std::move(keep);
  return out;
}

namespace {

std::pair<const double*, const double*> projection_arrays(const propagate::Sample& s,
                                                          Manifold m) {
  switch (m) {
    case Manifold::scattering: return {&s.cos2_scattering, &s.pop_scattering};
    case Manifold::intermediate: return {&s.cos2_intermediate, &s.pop_intermediate};
    default: return {&s.cos2_target, &s.pop_target};
  }
}

// samples inside [start, start + n_periods * period]; throws if the trace
// cannot host a single full period
std::pair<size_t, size_t> window_range(const Trajectory& traj, const AlignmentWindow& w) {
  if (w.period_ns <= 0) throw ValidationError("alignment window: period must be positive");
  const double len = w.end_ns - w.start_ns;
  if (len < w.period_ns - 1e-9)
    throw ValidationError("alignment window: shorter than one rotational period");
  const int periods = static_cast<int>(std::floor(len / w.period_ns + 1e-9));
  const double end = w.start_ns + periods * w.period_ns;
  size_t a = traj.t_ns.size(), b = 0;
  for (size_t k = 0; k < traj.t_ns.size(); ++k) {
    if (traj.t_ns[k] >= w.start_ns - 1e-9 && traj.t_ns[k] <= end + 1e-9) {
      a = std::min(a, k);
      b = std::max(b, k);
    }
  }
  if (a >= b) throw ValidationError("alignment window: no samples inside the window");
  return {a, b};
}

}  // namespace

std::vector<double> alignment_trace(const Trajectory& traj, Manifold projection,
                                    double population_floor) {
  std::vector<double> out(traj.samples.size());
  for (size_t k = 0; k < traj.samples.size(); ++k) {
    const auto [num, den] = projection_arrays(traj.samples[k], projection);
    out[k] = (*den < population_floor) ? std::numeric_limits<double>::quiet_NaN()
                                       : *num / *den;
  }
  return out;
}

double static_alignment(const Trajectory& traj, Manifold projection,
                        const AlignmentWindow& window) {
  const auto [a, b] = window_range(traj, window);
  double num = 0, den = 0;
  for (size_t k = a; k <= b; ++k) {
    const auto [nk, dk] = projection_arrays(traj.samples[k], projection);
    const double w = (k == a || k == b) ? 0.5 : 1.0;  // trapezoid over full periods
    num += w * *nk;
    den += w * *dk;
  }
  if (den <= 0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

double dynamic_alignment_amplitude(const Trajectory& traj, Manifold projection,
                                   const AlignmentWindow& window) {
  const auto [a, b] = window_range(traj, window);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (size_t k = a; k <= b; ++k) {
    const auto [nk, dk] = projection_arrays(traj.samples[k], projection);
    if (*dk <= 0) continue;
    const double v = *nk / *dk;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi >= lo)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 * (hi - lo);
}

EnsembleResult average_ensemble(const std::vector<WeightedTrajectory>& members,
                                const AveragingOptions& opts) {
  if (members.empty()) throw ValidationError("average_ensemble: no members");
  const auto& t0 = members.front().traj.t_ns;
  for (const auto& m : members) {
    if (m.traj.t_ns.size() != t0.size())
      throw ValidationError("average_ensemble: members use different time grids");
    for (size_t k = 0; k < t0.size(); k += std::max<size_t>(1, t0.size() / 7))
      if (std::abs(m.traj.t_ns[k] - t0[k]) > 1e-9)
        throw ValidationError("average_ensemble: members use different time grids");
  }

  const size_t S = t0.size();
  EnsembleResult out;
  out.t_ns = t0;
  out.undefined_floor = opts.population_floor;
  out.window = opts.window;

  std::vector<double> num_e(S, 0), den_e(S, 0), num_o(S, 0), den_o(S, 0);
  std::vector<double> inum_e(S, 0), iden_e(S, 0), inum_o(S, 0), iden_o(S, 0);
  double we_sum = 0, wo_sum = 0;
  for (const auto& m : members) {
    const bool even = m.parity == Parity::even;
    (even ? we_sum : wo_sum) += m.weight;
    for (size_t k = 0; k < S; ++k) {
      const auto& s = m.traj.samples[k];
      (even ? num_e : num_o)[k] += m.weight * s.cos2_target;
      (even ? den_e : den_o)[k] += m.weight * s.pop_target;
      (even ? inum_e : inum_o)[k] += m.weight * s.cos2_scattering;
      (even ? iden_e : iden_o)[k] += m.weight * s.pop_scattering;
    }
  }

  const double we = we_sum > 0 ? opts.even_fraction : 0.0;
  const double wo = wo_sum > 0 ? opts.odd_fraction : 0.0;
  const double wtot = we + wo;
  if (wtot <= 0) throw ValidationError("average_ensemble: zero total weight");

  auto ratio = [&](double n, double d) {
    return d < opts.population_floor ? std::numeric_limits<double>::quiet_NaN() : n / d;
  };

  out.pop_even.resize(S);
  out.pop_odd.resize(S);
  out.pop_total.resize(S);
  out.align_even.resize(S);
  out.align_odd.resize(S);
  out.align_total.resize(S);
  for (size_t k = 0; k < S; ++k) {
    out.pop_even[k] = we_sum > 0 ? den_e[k] : 0.0;
    out.pop_odd[k] = wo_sum > 0 ? den_o[k] : 0.0;
    out.pop_total[k] = (we * out.pop_even[k] + wo * out.pop_odd[k]) / wtot;
    out.align_even[k] = ratio(num_e[k], den_e[k]);
    out.align_odd[k] = ratio(num_o[k], den_o[k]);
    out.align_total[k] = ratio(we * num_e[k] + wo * num_o[k], we * den_e[k] + wo * den_o[k]);
    if (out.pop_total[k] < -1e-9 || out.pop_total[k] > 1.0 + 1e-9)
      throw NumericsError("average_ensemble: population left [0, 1]");
  }

  // pre-pulse isotropy diagnostic over the scattering projection
  out.initial_alignment =
      ratio(we * inum_e[0] + wo * inum_o[0], we * iden_e[0] + wo * iden_o[0]);
  out.final_population = out.pop_total.back();

  if (opts.window.period_ns > 0) {
    // scalars from the aggregated numerator/denominator over the window
    const Trajectory& probe = members.front().traj;
    const auto [a, b] = window_range(probe, opts.window);
    double num = 0, den = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t k = a; k <= b; ++k) {
      const double nk = we * num_e[k] + wo * num_o[k];
      const double dk = we * den_e[k] + wo * den_o[k];
      const double w = (k == a || k == b) ? 0.5 : 1.0;
      num += w * nk;
      den += w * dk;
      if (dk >= opts.population_floor) {
        const double v = nk / dk;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (den > 0) out.static_alignment = num / den;
    if (hi >= lo) out.dynamic_amplitude = 0.5 * (hi - lo);
  }
  return out;
}

ExperimentSetup make_setup(const radial::PotentialCurve& ground,
                           const radial::PotentialCurve& excited, double mass_amu,
                           const basis::BundleOptions& opts) {
  ExperimentSetup s;
  s.bundle = basis::build_radial_bundle(ground, excited, mass_amu, opts);
  s.even = basis::build_basis(s.bundle, opts.J_max, Parity::even);
  s.odd = opts.J_max >= 1 ? basis::build_basis(s.bundle, opts.J_max, Parity::odd) : nullptr;
  return s;
}

EnsembleResult run_experiment(const ExperimentSetup& setup, const pulse::PulseTrain& train,
                              const ExperimentOptions& opts) {
  const double period = setup.revival_period_ns();
  const double t0 = train.start_ns();
  const double t1 = train.end_ns() + opts.tail_periods * period;

  std::vector<WeightedTrajectory> members;
  std::vector<std::pair<Parity, basis::HamiltonianModel>> models;
  for (Parity parity : {Parity::even, Parity::odd}) {
    if (parity == Parity::even && !opts.include_even) continue;
    if (parity == Parity::odd && !opts.include_odd) continue;
    const auto& bs = parity == Parity::even ? setup.even : setup.odd;
    if (!bs) throw ValidationError("run_experiment: missing basis for requested parity");
    models.emplace_back(parity, basis::assemble_hamiltonian(bs, train, opts.assemble));
  }

  // one sample grid for every member: resolve the stride against the fastest
  // retained beat across all included parity models
  propagate::PropagateOptions prop = opts.propagation;
  {
    double f_max = 0;
    for (const auto& [parity, model] : models)
      for (const auto& pr : model.cos2_target)
        f_max = std::max(f_max, std::abs(model.diag_GHz[pr.i] - model.diag_GHz[pr.j]));
    if (f_max > 0) prop.sample_stride_ns = std::min(prop.sample_stride_ns, 1.0 / (8.0 * f_max));
  }

  for (auto& [parity, model] : models) {
    const auto& bs = parity == Parity::even ? setup.even : setup.odd;
    const auto selection = thermal_initial_states(*bs, opts.ensemble);
    const auto blocks = propagate::split_m_blocks(model);

    for (const auto& blk : blocks) {
      if (blk.M < 0) continue;  // identical to +M by symmetry
      std::vector<const InitialMember*> cols;
      for (const auto& m : selection.members)
        if (m.M == blk.M) cols.push_back(&m);
      if (cols.empty()) continue;

      std::vector<int> slot(model.size(), -1);
      for (int s = 0; s < static_cast<int>(blk.parent_index.size()); ++s)
        slot[blk.parent_index[s]] = s;

      Eigen::MatrixXcd initials =
          Eigen::MatrixXcd::Zero(blk.model.size(), static_cast<int>(cols.size()));
      for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        const int s = slot[cols[c]->level_index];
        if (s < 0) throw NumericsError("run_experiment: member missing from its M block");
        initials(s, c) = 1.0;
      }
      auto trajs = propagate::propagate_multi(initials, blk.model, t0, t1, prop);
      for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        const double mult = blk.M > 0 ? 2.0 : 1.0;  // +M stands in for -M as well
        members.push_back({mult * cols[c]->weight, parity, std::move(trajs[c])});
      }
    }
  }

  AveragingOptions avg;
  avg.even_fraction = opts.include_even ? opts.ensemble.even_fraction : 0.0;
  avg.odd_fraction = opts.include_odd ? opts.ensemble.odd_fraction : 0.0;
  avg.window.period_ns = period;
  avg.window.start_ns = train.end_ns();
  avg.window.end_ns = t1;
  if (opts.tail_periods < 1.0) avg.window.period_ns = 0;  // no full period available
  return average_ensemble(members, avg);
}

}  // namespace pasim::ensemble
