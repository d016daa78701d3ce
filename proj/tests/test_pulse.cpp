#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pasim/constants.hpp"
#include "pasim/errors.hpp"
#include "pasim/pulse.hpp"

#include <cmath>

using namespace pasim;
using namespace pasim::pulse;
namespace cn = pasim::constants;

TEST_CASE("envelope hits the Gaussian landmarks") {
  PulseSpec p;
  p.intensity_W_cm2 = 1000.0;
  p.sigma_ns = 10.0;
  p.center_ns = 50.0;
  const double peak = intensity_to_rabi(1000.0, 1.0);
  CHECK(envelope(p, 50.0) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(envelope(p, 60.0) == doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-14));
  CHECK(envelope(p, 100.0) == doctest::Approx(peak * std::exp(-25.0)).epsilon(1e-12));
  CHECK(envelope(p, 0.0) == envelope(p, 100.0));  // symmetric about the center
}

TEST_CASE("intensity_to_rabi") {
  CHECK(intensity_to_rabi(0.0, 1.0) == 0.0);
  // quadrupling intensity doubles the Rabi frequency
  CHECK(intensity_to_rabi(4000.0, 1.0) ==
        doctest::Approx(2.0 * intensity_to_rabi(1000.0, 1.0)).epsilon(1e-14));
  // independent hand conversion through SI constants
  const double E0 = std::sqrt(2.0 * 1000.0 * 1e4 /
                              (cn::epsilon0_F_m * cn::speed_of_light_m_s));
  const double expect_MHz = cn::debye_C_m * E0 / cn::planck_J_s * 1e-6;
  CHECK(intensity_to_rabi(1000.0, 1.0) == doctest::Approx(expect_MHz).epsilon(1e-12));
  // and through the atomic-units pipeline
  const double I_au = 1000.0 / 3.50944506e16;       // W/cm^2 per atomic intensity unit
  const double E0_au = std::sqrt(I_au);             // field in a.u.
  const double mu_au = 1.0 / 2.541746473;           // 1 debye in e a0
  const double rabi_au = mu_au * E0_au;             // hartree
  CHECK(intensity_to_rabi(1000.0, 1.0) ==
        doctest::Approx(rabi_au * cn::hartree_to_MHz).epsilon(1e-7));
  CHECK_THROWS_AS(intensity_to_rabi(-1.0, 1.0), ValidationError);
}

TEST_CASE("instantaneous detuning is linear in time") {
  PulseSpec p;
  p.chirp_MHz_per_ns = 0.0;
  p.detuning_MHz = -30.0;
  p.center_ns = 10.0;
  CHECK(instantaneous_detuning(p, -100.0) == -30.0);
  CHECK(instantaneous_detuning(p, 400.0) == -30.0);
  p.chirp_MHz_per_ns = 100.0;
  p.detuning_MHz = 0.0;
  CHECK(instantaneous_detuning(p, 12.0) == doctest::Approx(200.0));
  CHECK(instantaneous_detuning(p, 0.0) == doctest::Approx(-1000.0));
  CHECK(instantaneous_detuning(p, 10.0) == doctest::Approx(0.0));
}

TEST_CASE("pulse energy scales linearly with intensity and width") {
  auto energy = [](const PulseSpec& p) {
    double acc = 0.0;
    const double dt = 0.01;
    for (double t = p.center_ns - 8 * p.sigma_ns; t <= p.center_ns + 8 * p.sigma_ns; t += dt) {
      const double e = envelope(p, t);
      acc += e * e * dt;
    }
    return acc;
  };
  PulseSpec p;
  p.intensity_W_cm2 = 500.0;
  p.sigma_ns = 7.0;
  const double base = energy(p);
  PulseSpec p2 = p;
  p2.intensity_W_cm2 = 1500.0;
  CHECK(energy(p2) == doctest::Approx(3.0 * base).epsilon(1e-6));
  PulseSpec p3 = p;
  p3.sigma_ns = 14.0;
  CHECK(energy(p3) == doctest::Approx(2.0 * base).epsilon(1e-6));
}

TEST_CASE("make_train") {
  PulseSpec base;
  base.sigma_ns = 10.0;
  base.center_ns = 0.0;

  SUBCASE("single pulse returns the base") {
    const auto t = make_train(base, 1, 0.0);
    REQUIRE(t.size() == 1);
    CHECK(t[0].center_ns == 0.0);
  }
  SUBCASE("two pulses at the minimum 5 sigma delay barely overlap") {
    const auto t = make_train(base, 2, 50.0);
    REQUIRE(t.size() == 2);
    CHECK(t[1].center_ns == 50.0);
    const double mid = envelope(t[0], 25.0);
    CHECK(mid / intensity_to_rabi(base.intensity_W_cm2, base.mu0_debye) < 1e-2);
    CHECK(envelope(t[0], 50.0) / intensity_to_rabi(base.intensity_W_cm2, 1.0) < 1e-10);
  }
  SUBCASE("four pulses at 56 ns") {
    const auto t = make_train(base, 4, 56.0);
    REQUIRE(t.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(t[k].center_ns == doctest::Approx(56.0 * k));
  }
  SUBCASE("sub-5-sigma delay rejected without the override") {
    CHECK_THROWS_AS(make_train(base, 2, 49.0), ValidationError);
    CHECK_NOTHROW(make_train(base, 2, 49.0, true));
    CHECK_THROWS_AS(make_train(base, 0, 50.0), ValidationError);
  }
}

TEST_CASE("pulse train windows and frame detuning") {
  PulseSpec base;
  base.sigma_ns = 10.0;
  base.center_ns = 50.0;
  base.detuning_MHz = 0.0;
  base.chirp_MHz_per_ns = 100.0;

  SUBCASE("well separated pulses keep separate windows") {
    PulseTrain train(make_train(base, 2, 150.0));
    REQUIRE(train.windows().size() == 2);
    CHECK(train.start_ns() == doctest::Approx(0.0));
    CHECK(train.end_ns() == doctest::Approx(250.0));
    // ramp inside the first window, carrier value in the gap
    CHECK(train.delta_eff_MHz(52.0) == doctest::Approx(200.0));
    CHECK(train.delta_eff_MHz(125.0) == doctest::Approx(0.0));
    CHECK(train.delta_eff_MHz(202.0) == doctest::Approx(200.0));
  }
  SUBCASE("adjacent windows merge") {
    PulseTrain train(make_train(base, 2, 50.0));
    CHECK(train.windows().size() == 1);
    CHECK(train.envelope_MHz(75.0) ==
          doctest::Approx(envelope(train.pulses()[0], 75.0) +
                          envelope(train.pulses()[1], 75.0)));
  }
  SUBCASE("accumulated detuning phase is continuous across window edges") {
    PulseTrain train(make_train(base, 2, 150.0));
    for (double t : {-0.001, 0.001, 99.999, 100.001, 149.999, 150.001}) {
      const double below = train.delta_integral_GHz_ns(t - 1e-7);
      const double above = train.delta_integral_GHz_ns(t + 1e-7);
      CHECK(std::abs(above - below) < 1e-6);
    }
    // symmetric ramp integrates to zero over a full window
    CHECK(train.delta_integral_GHz_ns(100.0) == doctest::Approx(0.0).epsilon(1e-12));
  }
}
