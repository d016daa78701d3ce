#include "pasim/propagate.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <complex>
#include <sstream>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"

namespace pasim::propagate {

namespace cn = pasim::constants;
using basis::HamiltonianModel;
using basis::Manifold;

namespace {

using state_type = std::vector<std::complex<double>>;
constexpr std::complex<double> kI{0.0, 1.0};

// Interaction-picture engine: phi_j = exp(i theta_j(t)) psi_j with
// theta_j = 2 pi (E_j t - chirped_j Delta(t)). The field term becomes
// dphi/dt = -i pi g(t) e^{i theta} C (e^{-i theta} phi), so gaps between
// pulse windows cost nothing and the stiff diagonal never enters the
// integrator.
class Engine {
 public:
  Engine(const HamiltonianModel& m, int ncols) : m_(m), n_(m.size()), ncols_(ncols) {
    phase_.resize(n_);
  }

  void phases(double t, std::vector<std::complex<double>>& out) const {
    const double delta = m_.train.delta_integral_GHz_ns(t);
    out.resize(n_);
    for (int j = 0; j < n_; ++j) {
      const double theta =
          cn::two_pi * (m_.diag_GHz[j] * t - (m_.chirped[j] ? delta : 0.0));
      out[j] = std::polar(1.0, theta);
    }
  }

  void operator()(const state_type& phi, state_type& dphi, double t) const {
    const double g_GHz = m_.train.envelope_MHz(t) * 1e-3;
    dphi.assign(phi.size(), {0.0, 0.0});
    if (g_GHz == 0.0) return;
    phases(t, phase_);
    const double scale = cn::pi * g_GHz;
    for (int c = 0; c < ncols_; ++c) {
      const auto* p = phi.data() + static_cast<size_t>(c) * n_;
      auto* d = dphi.data() + static_cast<size_t>(c) * n_;
      for (const auto& cp : m_.couplings) {
        const std::complex<double> zi = std::conj(phase_[cp.i]) * p[cp.i];
        const std::complex<double> zj = std::conj(phase_[cp.j]) * p[cp.j];
        d[cp.i] += cp.coeff * zj * phase_[cp.i];
        d[cp.j] += cp.coeff * zi * phase_[cp.j];
      }
      for (int j = 0; j < n_; ++j) d[j] *= -kI * scale;
    }
  }

 private:
  const HamiltonianModel& m_;
  int n_, ncols_;
  mutable std::vector<std::complex<double>> phase_;
};

double max_target_beat_GHz(const HamiltonianModel& m) {
  double f = 0.0;
  for (const auto& pr : m.cos2_target)
    f = std::max(f, std::abs(m.diag_GHz[pr.i] - m.diag_GHz[pr.j]));
  return f;
}

Sample measure(const HamiltonianModel& m, const std::complex<double>* phi,
               const std::vector<std::complex<double>>& phase) {
  Sample s;
  const int n = m.size();
  for (int j = 0; j < n; ++j) {
    const double p = std::norm(phi[j]);
    s.norm += p;
    switch (m.manifold[j]) {
      case Manifold::scattering: s.pop_scattering += p; break;
      case Manifold::intermediate: s.pop_intermediate += p; break;
      case Manifold::target: s.pop_target += p; break;
    }
  }
  auto accumulate = [&](const std::vector<basis::Cos2Pair>& pairs, double& out) {
    for (const auto& pr : pairs) {
      const std::complex<double> psi_i = std::conj(phase[pr.i]) * phi[pr.i];
      const std::complex<double> psi_j = std::conj(phase[pr.j]) * phi[pr.j];
      const double re = (std::conj(psi_i) * psi_j).real();
      out += pr.value * re * (pr.i == pr.j ? 1.0 : 2.0);
    }
  };
  accumulate(m.cos2_scattering, s.cos2_scattering);
  accumulate(m.cos2_intermediate, s.cos2_intermediate);
  accumulate(m.cos2_target, s.cos2_target);
  return s;
}

}  // namespace

std::vector<Trajectory> propagate_multi(const Eigen::MatrixXcd& initials,
                                        const HamiltonianModel& model, double t0_ns,
                                        double t1_ns, const PropagateOptions& opts) {
  const int n = model.size();
  const int K = static_cast<int>(initials.cols());
  if (initials.rows() != n)
    throw ValidationError("propagate: state dimension does not match the model");
  if (!(t1_ns > t0_ns)) throw ValidationError("propagate: need t1 > t0");

  double stride = opts.sample_stride_ns;
  const double f_max = max_target_beat_GHz(model);
  if (f_max > 0) stride = std::min(stride, 1.0 / (8.0 * f_max));

  Engine eng(model, K);
  std::vector<std::complex<double>> phase;

  // interaction-picture amplitudes at t0
  state_type phi(static_cast<size_t>(n) * K);
  eng.phases(t0_ns, phase);
  for (int c = 0; c < K; ++c)
    for (int j = 0; j < n; ++j)
      phi[static_cast<size_t>(c) * n + j] = phase[j] * initials(j, c);

  // sample clock
  const int n_samples = std::max(2, static_cast<int>(std::ceil((t1_ns - t0_ns) / stride)) + 1);
  std::vector<double> times(n_samples);
  for (int s = 0; s < n_samples; ++s)
    times[s] = t0_ns + (t1_ns - t0_ns) * s / double(n_samples - 1);

  // field-active intervals clipped to [t0, t1]
  std::vector<std::pair<double, double>> active;
  for (const auto& w : model.train.windows()) {
    const double a = std::max(w.first, t0_ns), b = std::min(w.second, t1_ns);
    if (b > a) active.emplace_back(a, b);
  }

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state_type>>(
      opts.atol, opts.rtol);

  double dt_carry = 1e-3;  // adapted step survives across segments
  auto integrate_to = [&](double from, double to) {
    double t = from;
    double dt = std::min(dt_carry, to - from);
    int rejections = 0;
    while (t < to - 1e-12) {
      dt = std::min(dt, to - t);
      const auto res = stepper.try_step(eng, phi, t, dt);
      if (res == ode::fail) {
        if (++rejections > 200 || dt < 1e-10) {
          std::ostringstream os;
          os << "propagate: step size underflow at t = " << t << " ns";
          throw NumericsError(os.str());
        }
      } else {
        rejections = 0;
        dt_carry = dt;
      }
    }
  };

  std::vector<Trajectory> out(K);
  for (int c = 0; c < K; ++c) {
    out[c].t_ns.reserve(n_samples);
    out[c].samples.reserve(n_samples);
  }

  double t_now = t0_ns;
  size_t win = 0;
  for (int s = 0; s < n_samples; ++s) {
    const double ts = times[s];
    // advance through any active stretches before this sample
    while (t_now < ts - 1e-12) {
      while (win < active.size() && active[win].second <= t_now + 1e-12) ++win;
      if (win >= active.size() || active[win].first >= ts) {
        t_now = ts;  // free stretch: phi unchanged
        break;
      }
      const double a = std::max(active[win].first, t_now);
      const double b = std::min(active[win].second, ts);
      if (b > a) integrate_to(a, b);
      t_now = b;
      if (t_now >= ts - 1e-12) break;
    }
    eng.phases(ts, phase);
    for (int c = 0; c < K; ++c) {
      const auto* pc = phi.data() + static_cast<size_t>(c) * n;
      Sample smp = measure(model, pc, phase);
      if (opts.norm_guard) {
        const double budget =
            opts.norm_tol_per_ns * std::max(1.0, ts - t0_ns) + 10.0 * opts.rtol;
        if (std::abs(smp.norm - 1.0) > budget) {
          std::ostringstream os;
          os << "propagate: norm drifted to " << smp.norm << " at t = " << ts
             << " ns (budget " << budget << ")";
          throw NumericsError(os.str());
        }
      }
      out[c].t_ns.push_back(ts);
      out[c].samples.push_back(smp);
      if (opts.store_states || s == n_samples - 1) {
        Eigen::VectorXcd psi(n);
        for (int j = 0; j < n; ++j) psi(j) = std::conj(phase[j]) * pc[j];
        if (opts.store_states) out[c].states.push_back(psi);
        if (s == n_samples - 1) out[c].final_state = {psi, ts};
      }
    }
  }
  return out;
}

Trajectory propagate(const StateVector& initial, const HamiltonianModel& model,
                     double t0_ns, double t1_ns, const PropagateOptions& opts) {
  Eigen::MatrixXcd cols(initial.amps.size(), 1);
  cols.col(0) = initial.amps;
  auto all = propagate_multi(cols, model, t0_ns, t1_ns, opts);
  return std::move(all[0]);
}

Trajectory free_evolve(const StateVector& initial, const HamiltonianModel& model,
                       double duration_ns, const PropagateOptions& opts) {
  if (duration_ns < 0) throw ValidationError("free_evolve: negative duration");
  const int n = model.size();
  if (initial.amps.size() != n)
    throw ValidationError("free_evolve: state dimension does not match the model");
  Engine eng(model, 1);
  std::vector<std::complex<double>> phase;

  const double t0 = initial.t_ns, t1 = initial.t_ns + duration_ns;
  double stride = opts.sample_stride_ns;
  const double f_max = max_target_beat_GHz(model);
  if (f_max > 0) stride = std::min(stride, 1.0 / (8.0 * f_max));
  const int n_samples =
      duration_ns == 0
          ? 1
          : std::max(2, static_cast<int>(std::ceil(duration_ns / stride)) + 1);

  // phi is frozen; only the diagonal phases advance
  state_type phi(n);
  eng.phases(t0, phase);
  for (int j = 0; j < n; ++j) phi[j] = phase[j] * initial.amps(j);

  Trajectory out;
  for (int s = 0; s < n_samples; ++s) {
    const double ts = n_samples == 1 ? t0 : t0 + duration_ns * s / double(n_samples - 1);
    eng.phases(ts, phase);
    Sample smp = measure(model, phi.data(), phase);
    out.t_ns.push_back(ts);
    out.samples.push_back(smp);
    if (opts.store_states || s == n_samples - 1) {
      Eigen::VectorXcd psi(n);
      for (int j = 0; j < n; ++j) psi(j) = std::conj(phase[j]) * phi[j];
      if (opts.store_states) out.states.push_back(psi);
      if (s == n_samples - 1) out.final_state = {psi, ts};
    }
  }
  return out;
}

std::vector<MBlock> split_m_blocks(const basis::HamiltonianModel& model) {
  if (!model.basis)
    throw ValidationError("split_m_blocks: model carries no basis metadata");
  const auto& levels = model.basis->levels;
  std::map<int, std::vector<int>> members;
  for (int i = 0; i < model.size(); ++i) members[levels[i].ang.M].push_back(i);

  std::vector<MBlock> out;
  for (auto& [M, idx] : members) {
    MBlock blk;
    blk.M = M;
    blk.parent_index = idx;
    std::vector<int> slot(model.size(), -1);
    for (int s = 0; s < static_cast<int>(idx.size()); ++s) slot[idx[s]] = s;

    auto& bm = blk.model;
    bm.train = model.train;
    bm.diag_GHz.reserve(idx.size());
    bm.chirped.reserve(idx.size());
    bm.manifold.reserve(idx.size());
    for (int i : idx) {
      bm.diag_GHz.push_back(model.diag_GHz[i]);
      bm.chirped.push_back(model.chirped[i]);
      bm.manifold.push_back(model.manifold[i]);
    }
    for (const auto& c : model.couplings)
      if (slot[c.i] >= 0 && slot[c.j] >= 0)
        bm.couplings.push_back({slot[c.i], slot[c.j], c.coeff});
    auto remap_pairs = [&](const std::vector<basis::Cos2Pair>& in,
                           std::vector<basis::Cos2Pair>& outp) {
      for (const auto& pr : in)
        if (slot[pr.i] >= 0 && slot[pr.j] >= 0)
          outp.push_back({slot[pr.i], slot[pr.j], pr.value});
    };
    remap_pairs(model.cos2_scattering, bm.cos2_scattering);
    remap_pairs(model.cos2_intermediate, bm.cos2_intermediate);
    remap_pairs(model.cos2_target, bm.cos2_target);
    out.push_back(std::move(blk));
  }
  return out;
}

}  // namespace pasim::propagate
