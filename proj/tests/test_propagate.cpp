#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"
#include "pasim/propagate.hpp"

#include <cmath>
#include <complex>

using namespace pasim::propagate;
using pasim::ValidationError;
using pasim::basis::HamiltonianModel;
using pasim::basis::Manifold;
namespace pulse = pasim::pulse;
namespace cn = pasim::constants;

namespace {

// hand-built two-level model: one scattering row, one intermediate row
// coupled with unit coefficient; the intermediate rides the detuning
HamiltonianModel two_level(const pulse::PulseSpec& p) {
  HamiltonianModel m;
  m.train = pulse::PulseTrain({p});
  m.diag_GHz = {0.0, 0.0};
  m.chirped = {0, 1};
  m.manifold = {Manifold::scattering, Manifold::intermediate};
  m.couplings = {{0, 1, 1.0}};
  return m;
}

StateVector ground_state(int n, double t0) {
  StateVector s;
  s.amps = Eigen::VectorXcd::Zero(n);
  s.amps(0) = 1.0;
  s.t_ns = t0;
  return s;
}

// intensity that makes the angular pulse area of a Gaussian equal `area`
double intensity_for_area(double area_rad, double sigma_ns, double mu0 = 1.0) {
  const double rabi_MHz = area_rad / (cn::two_pi * 1e-3 * std::sqrt(cn::pi) * sigma_ns);
  const double v = rabi_MHz / (pulse::intensity_to_rabi(1.0, mu0));
  return v * v;
}

}  // namespace

TEST_CASE("zero field leaves populations frozen and advances phases") {
  pulse::PulseSpec p;
  p.intensity_W_cm2 = 0.0;
  p.center_ns = 10.0;
  HamiltonianModel m = two_level(p);
  m.diag_GHz = {0.3, -0.6};

  StateVector init;
  init.amps = Eigen::VectorXcd(2);
  init.amps << std::complex<double>(0.8, 0.0), std::complex<double>(0.0, 0.6);
  init.t_ns = 0.0;

  const auto traj = propagate(init, m, 0.0, 20.0, {});
  CHECK(std::abs(traj.final_state.amps(0)) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(traj.final_state.amps(1)) == doctest::Approx(0.6).epsilon(1e-12));
  const auto expect0 = 0.8 * std::polar(1.0, -cn::two_pi * 0.3 * 20.0);
  const auto expect1 =
      std::complex<double>(0.0, 0.6) * std::polar(1.0, cn::two_pi * 0.6 * 20.0);
  CHECK(std::abs(traj.final_state.amps(0) - expect0) < 1e-10);
  CHECK(std::abs(traj.final_state.amps(1) - expect1) < 1e-10);
}

TEST_CASE("resonant pi pulse transfers everything") {
  pulse::PulseSpec p;
  p.sigma_ns = 10.0;
  p.center_ns = 50.0;
  p.intensity_W_cm2 = intensity_for_area(cn::pi, 10.0);
  HamiltonianModel m = two_level(p);
  const auto traj = propagate(ground_state(2, 0.0), m, 0.0, 100.0, {});
  CHECK(std::norm(traj.final_state.amps(1)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(traj.samples.back().pop_intermediate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("detuned flat drive oscillates at the generalized Rabi frequency") {
  // near-constant envelope: sigma enormous compared with the window
  pulse::PulseSpec p;
  p.sigma_ns = 4.0e4;
  p.center_ns = 0.0;
  p.detuning_MHz = 40.0;
  p.mu0_debye = 1.0;
  p.intensity_W_cm2 = std::pow(30.0 / pulse::intensity_to_rabi(1.0, 1.0), 2);  // 30 MHz
  HamiltonianModel m = two_level(p);

  const double W_GHz = std::hypot(30.0, 40.0) * 1e-3;
  const double amp = (30.0 * 30.0) / (30.0 * 30.0 + 40.0 * 40.0);
  PropagateOptions opts;
  opts.sample_stride_ns = 0.5;
  const auto traj = propagate(ground_state(2, 0.0), m, 0.0, 120.0, opts);
  for (size_t k = 0; k < traj.t_ns.size(); k += 7) {
    const double t = traj.t_ns[k];
    const double expect = amp * std::pow(std::sin(cn::pi * W_GHz * t), 2);
    REQUIRE(traj.samples[k].pop_intermediate == doctest::Approx(expect).epsilon(5e-4));
  }
}

TEST_CASE("norm drift stays within the unitarity contract") {
  pulse::PulseSpec p;
  p.sigma_ns = 8.0;
  p.center_ns = 40.0;
  p.intensity_W_cm2 = intensity_for_area(0.8 * cn::pi, 8.0);
  p.chirp_MHz_per_ns = 25.0;
  HamiltonianModel m;
  m.train = pulse::PulseTrain({p});
  m.diag_GHz = {0.0, 0.05, -0.764};
  m.chirped = {0, 1, 0};
  m.manifold = {Manifold::scattering, Manifold::intermediate, Manifold::target};
  m.couplings = {{0, 1, 0.7}, {1, 2, 0.4}};

  const auto fwd = propagate(ground_state(3, 0.0), m, 0.0, 80.0, {});
  for (const auto& s : fwd.samples) CHECK(std::abs(s.norm - 1.0) < 1e-8 * 80.0);
}

TEST_CASE("forward-backward reversal reproduces the initial state") {
  pulse::PulseSpec p;
  p.sigma_ns = 8.0;
  p.center_ns = 40.0;
  p.intensity_W_cm2 = intensity_for_area(1.3 * cn::pi, 8.0);
  HamiltonianModel m;
  m.train = pulse::PulseTrain({p});
  m.diag_GHz = {0.0, 0.1, -0.764};
  m.chirped = {0, 1, 0};
  m.manifold = {Manifold::scattering, Manifold::intermediate, Manifold::target};
  m.couplings = {{0, 1, 0.7}, {1, 2, 0.4}};

  const auto fwd = propagate(ground_state(3, 0.0), m, 0.0, 80.0, {});
  // reverse evolution: conjugate amplitudes evolve forward under the same H
  StateVector rev;
  rev.amps = fwd.final_state.amps.conjugate();
  rev.t_ns = 0.0;
  // mirror the pulse about t = 40 (it is symmetric; detuning zero, no chirp)
  const auto back = propagate(rev, m, 0.0, 80.0, {});
  const std::complex<double> overlap =
      (back.final_state.amps.conjugate().transpose() * ground_state(3, 0.0).amps)(0);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-6);
}

TEST_CASE("tolerance tightening improves the result consistently") {
  // violent drive: fast chirp and a many-pi pulse area keep the adaptive
  // stepper honestly error-limited instead of roundoff-limited
  pulse::PulseSpec p;
  p.sigma_ns = 20.0;
  p.center_ns = 100.0;
  p.intensity_W_cm2 = intensity_for_area(8.0 * cn::pi, 20.0);
  p.chirp_MHz_per_ns = 60.0;
  p.detuning_MHz = 43.0;
  HamiltonianModel m = two_level(p);

  auto run = [&](double rtol) {
    PropagateOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-2;
    o.sample_stride_ns = 10.0;
    o.norm_guard = false;
    return propagate(ground_state(2, 0.0), m, 0.0, 200.0, o).final_state.amps;
  };
  const auto ref = run(1e-13);
  const double e6 = (run(1e-6) - ref).norm();
  const double e9 = (run(1e-9) - ref).norm();
  CHECK(e6 < 1e-4);
  CHECK(e9 < e6);
  CHECK(e9 < 1e-7);
}

TEST_CASE("amplitudes never leak between M blocks") {
  // two disconnected two-level systems emulate distinct M blocks
  pulse::PulseSpec p;
  p.sigma_ns = 5.0;
  p.center_ns = 25.0;
  p.intensity_W_cm2 = intensity_for_area(1.1, 5.0);
  HamiltonianModel m;
  m.train = pulse::PulseTrain({p});
  m.diag_GHz = {0.0, 0.0, 0.01, 0.01};
  m.chirped = {0, 1, 0, 1};
  m.manifold = {Manifold::scattering, Manifold::intermediate, Manifold::scattering,
                Manifold::intermediate};
  m.couplings = {{0, 1, 1.0}, {2, 3, 0.5}};

  StateVector init;
  init.amps = Eigen::VectorXcd(4);
  init.amps << 0.6, 0.0, 0.8, 0.0;
  init.t_ns = 0.0;
  PropagateOptions o;
  o.store_states = true;
  const auto traj = propagate(init, m, 0.0, 50.0, o);
  for (const auto& psi : traj.states) {
    CHECK(std::norm(psi(0)) + std::norm(psi(1)) == doctest::Approx(0.36).epsilon(1e-8));
    CHECK(std::norm(psi(2)) + std::norm(psi(3)) == doctest::Approx(0.64).epsilon(1e-8));
  }
}

TEST_CASE("free evolution") {
  HamiltonianModel m;
  pulse::PulseSpec p;
  p.intensity_W_cm2 = 0.0;
  p.center_ns = 1000.0;
  m.train = pulse::PulseTrain({p});
  const double B_GHz = 16.29e-3;
  m.diag_GHz = {-0.764, -0.764 + 2.0 * B_GHz};
  m.chirped = {0, 0};
  m.manifold = {Manifold::target, Manifold::target};
  m.cos2_target = {{0, 0, 1.0 / 3.0}, {1, 1, 0.6}, {0, 1, 0.2}};

  StateVector init;
  init.amps = Eigen::VectorXcd(2);
  init.amps << std::sqrt(0.5), std::sqrt(0.5);
  init.t_ns = 0.0;

  SUBCASE("zero duration is the identity") {
    const auto traj = free_evolve(init, m, 0.0, {});
    CHECK((traj.final_state.amps - init.amps).norm() < 1e-14);
  }
  SUBCASE("a 2B splitting revives after 1/(2B) = 30.7 ns") {
    const double period = 1.0 / (2.0 * B_GHz);
    PropagateOptions o;
    o.sample_stride_ns = period / 64.0;
    const auto traj = free_evolve(init, m, period, o);
    const std::complex<double> overlap =
        (traj.final_state.amps.conjugate().transpose() * init.amps)(0);
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
    // the projected alignment oscillates and returns to its initial value
    const double a0 = traj.samples.front().cos2_target / traj.samples.front().pop_target;
    const double a1 = traj.samples.back().cos2_target / traj.samples.back().pop_target;
    CHECK(a0 == doctest::Approx(a1).epsilon(1e-9));
    double amin = 1e9, amax = -1e9;
    for (const auto& s : traj.samples) {
      amin = std::min(amin, s.cos2_target / s.pop_target);
      amax = std::max(amax, s.cos2_target / s.pop_target);
    }
    CHECK(amax - amin > 0.3);  // genuine beat, not a constant
  }
  SUBCASE("single level observables stay constant") {
    StateVector single;
    single.amps = Eigen::VectorXcd::Zero(2);
    single.amps(1) = 1.0;
    single.t_ns = 0.0;
    const auto traj = free_evolve(single, m, 100.0, {});
    for (const auto& s : traj.samples) {
      CHECK(s.pop_target == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(s.cos2_target == doctest::Approx(0.6).epsilon(1e-14));
    }
  }
}

TEST_CASE("validation errors") {
  pulse::PulseSpec p;
  HamiltonianModel m = two_level(p);
  CHECK_THROWS_AS(propagate(ground_state(3, 0.0), m, 0.0, 10.0, {}), ValidationError);
  CHECK_THROWS_AS(propagate(ground_state(2, 0.0), m, 10.0, 10.0, {}), ValidationError);
  CHECK_THROWS_AS(free_evolve(ground_state(2, 0.0), m, -5.0, {}), ValidationError);
}
