#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pasim/basis.hpp"
#include "pasim/errors.hpp"

#include <cmath>
#include <set>

using namespace pasim;
using namespace pasim::basis;

namespace {

// small shared bundle so the radial solves run once
std::shared_ptr<const RadialBundle> bundle(int J_max = 3, int n_box = 6) {
  static std::map<std::pair<int, int>, std::shared_ptr<const RadialBundle>> cache;
  auto& slot = cache[{J_max, n_box}];
  if (!slot) {
    BundleOptions o;
    o.J_max = J_max;
    o.n_box = n_box;
    o.check_convergence = false;
    o.grid.R_max_bohr = 600.0;
    slot = build_radial_bundle(radial::calibrated_ground_curve(),
                               radial::calibrated_excited_curve(),
                               radial::kReducedMassAmu, o);
  }
  return slot;
}

// brute-force selection-rule closure: which (manifold, J, M) sets are
// reachable from the parity family's scattering states under q=0 dipole hops
std::set<std::tuple<int, int, int>> closure(int J_max, Parity parity, int n_box) {
  std::set<std::tuple<int, int, int>> out;  // (manifold, J, M)
  for (int J = 0; J <= J_max; ++J) {
    if ((J % 2 == 0) != (parity == Parity::even)) continue;
    for (int M = -J; M <= J; ++M) {
      out.insert({0, J, M});
      for (int Jp : {J - 1, J + 1}) {
        if (Jp < 0 || Jp > J_max + 1 || std::abs(M) > Jp) continue;
        out.insert({1, Jp, M});
        for (int Jt : {Jp - 1, Jp + 1}) {
          if (Jt < 0 || Jt > J_max || std::abs(M) > Jt) continue;
          out.insert({2, Jt, M});
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("radial bundle exposes the calibrated constants") {
  auto b = bundle();
  CHECK(b->binding_MHz == doctest::Approx(764.0).epsilon(2e-3));
  CHECK(b->B_target_MHz == doctest::Approx(16.29).epsilon(2e-3));
  CHECK(b->B_intermediate_MHz == doctest::Approx(8.35).epsilon(2e-2));
  CHECK(std::abs(b->fc_down) > 0.05);  // bound-bound overlap is substantial
  for (int J = 0; J <= b->J_max; ++J)
    for (int n = 0; n < b->n_box; ++n) CHECK(std::abs(b->fc_up(J, n)) < 1.0);
}

TEST_CASE("basis with J_max=0 holds exactly n_box + 2 levels") {
  auto b = bundle(0, 6);
  auto set = build_basis(b, 0, Parity::even);
  // scattering J=0 box levels, one intermediate (J=1, M=0), one target (J=0)
  CHECK(set->size() == 6 + 2);
  int n_int = 0, n_t = 0;
  for (const auto& l : set->levels) {
    CHECK(std::abs(l.ang.M) <= l.ang.J);
    CHECK(std::abs(l.ang.Omega) <= l.ang.J);
    if (l.manifold == Manifold::intermediate) {
      ++n_int;
      CHECK(l.ang.J == 1);
      CHECK(l.ang.M == 0);
    }
    if (l.manifold == Manifold::target) ++n_t;
  }
  CHECK(n_int == 1);
  CHECK(n_t == 1);
  CHECK_THROWS_AS(build_basis(b, 0, Parity::odd), ValidationError);
}

TEST_CASE("basis contents match brute-force selection-rule closure") {
  auto b = bundle();
  for (Parity p : {Parity::even, Parity::odd}) {
    auto set = build_basis(b, 3, p);
    const auto want = closure(3, p, b->n_box);
    std::set<std::tuple<int, int, int>> got;
    for (const auto& l : set->levels)
      got.insert({static_cast<int>(l.manifold), l.ang.J, l.ang.M});
    CHECK(got == want);
    // every scattering (J, M) channel carries the full box ladder
    int n_scat = 0;
    for (const auto& l : set->levels) n_scat += l.manifold == Manifold::scattering;
    int scat_channels = 0;
    for (const auto& [m, J, M] : want) scat_channels += m == 0;
    CHECK(n_scat == scat_channels * b->n_box);
  }
}

TEST_CASE("basis rebuild is idempotent") {
  auto b = bundle();
  auto s1 = build_basis(b, 3, Parity::odd);
  auto s2 = build_basis(b, 3, Parity::odd);
  REQUIRE(s1->size() == s2->size());
  for (int i = 0; i < s1->size(); ++i) {
    CHECK(s1->levels[i].manifold == s2->levels[i].manifold);
    CHECK(s1->levels[i].ang.J == s2->levels[i].ang.J);
    CHECK(s1->levels[i].ang.M == s2->levels[i].ang.M);
    CHECK(s1->levels[i].energy_GHz == s2->levels[i].energy_GHz);
  }
}

TEST_CASE("missing radial solutions are reported with the channel") {
  auto b = bundle(2, 4);
  try {
    build_basis(b, 5, Parity::even);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("J=5") != std::string::npos);
  }
}

TEST_CASE("target levels carry the rigid-rotor energies") {
  auto b = bundle();
  auto set = build_basis(b, 3, Parity::odd);
  for (const auto& l : set->levels) {
    if (l.manifold != Manifold::target) continue;
    const double expect =
        -b->binding_MHz * 1e-3 + b->B_target_MHz * 1e-3 * l.ang.J * (l.ang.J + 1);
    CHECK(l.energy_GHz == doctest::Approx(expect).epsilon(1e-12));
  }
  for (const auto& l : set->levels)
    if (l.manifold == Manifold::scattering) CHECK(l.energy_GHz >= 0.0);
}

TEST_CASE("assembled Hamiltonian structure") {
  auto b = bundle();
  auto set = build_basis(b, 3, Parity::even);
  pulse::PulseSpec p;
  p.center_ns = 50.0;
  basis::HamiltonianModel model = assemble_hamiltonian(set, pulse::PulseTrain({p}));

  SUBCASE("couplings connect only adjacent manifolds and conserve M") {
    CHECK(!model.couplings.empty());
    for (const auto& c : model.couplings) {
      const auto& a = set->levels[c.i];
      const auto& bl = set->levels[c.j];
      const bool lambda_pair =
          (a.manifold == Manifold::intermediate) != (bl.manifold == Manifold::intermediate);
      CHECK(lambda_pair);
      CHECK(a.ang.M == bl.ang.M);
      CHECK(std::abs(a.ang.J - bl.ang.J) == 1);
    }
  }
  SUBCASE("no direct scattering-target coupling") {
    for (const auto& c : model.couplings) {
      const bool direct = (set->levels[c.i].manifold == Manifold::scattering &&
                           set->levels[c.j].manifold == Manifold::target) ||
                          (set->levels[c.i].manifold == Manifold::target &&
                           set->levels[c.j].manifold == Manifold::scattering);
      CHECK(!direct);
    }
  }
  SUBCASE("chirp rides only on intermediate rows") {
    for (int i = 0; i < model.size(); ++i)
      CHECK(static_cast<bool>(model.chirped[i]) ==
            (set->levels[i].manifold == Manifold::intermediate));
  }
  SUBCASE("M-block sizes match the brute-force enumeration") {
    std::map<int, int> sizes;
    for (const auto& l : set->levels) ++sizes[l.ang.M];
    std::map<int, int> expect;
    for (const auto& [m, J, M] : closure(3, Parity::even, b->n_box))
      expect[M] += (m == 0) ? b->n_box : 1;
    CHECK(sizes == expect);
    // couplings never straddle M blocks
    for (const auto& c : model.couplings)
      CHECK(set->levels[c.i].ang.M == set->levels[c.j].ang.M);
  }
  SUBCASE("cos2 pairs stay within one manifold and one M") {
    for (const auto& pr : model.cos2_target) {
      CHECK(set->levels[pr.i].manifold == Manifold::target);
      CHECK(set->levels[pr.i].ang.M == set->levels[pr.j].ang.M);
      CHECK(std::abs(set->levels[pr.i].ang.J - set->levels[pr.j].ang.J) <= 2);
    }
  }
}

TEST_CASE("single-J unit-factor model reduces to a vibration-electronic ladder") {
  auto b = bundle(0, 6);
  auto set = build_basis(b, 0, Parity::even);
  AssembleOptions opts;
  opts.unit_rotational_factors = true;
  pulse::PulseSpec p;
  p.center_ns = 50.0;
  auto model = assemble_hamiltonian(set, pulse::PulseTrain({p}), opts);
  // couplings survive with pure Franck-Condon weights
  REQUIRE(model.couplings.size() == 7);  // 6 box states + 1 target, all through J'=1
  for (const auto& c : model.couplings) {
    const auto& lo = set->levels[c.i].manifold == Manifold::intermediate
                         ? set->levels[c.j]
                         : set->levels[c.i];
    const double fc = lo.manifold == Manifold::scattering
                          ? b->fc_up(lo.ang.J, lo.radial_index)
                          : b->fc_down;
    CHECK(c.coeff == doctest::Approx(fc).epsilon(1e-12));
  }
  // the lone target level has only its isotropic diagonal element
  REQUIRE(model.cos2_target.size() == 1);
  CHECK(model.cos2_target[0].value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}
