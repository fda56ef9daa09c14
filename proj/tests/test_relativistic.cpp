#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qmlab/relativistic.hpp"
#include "qmlab/rng.hpp"

using namespace qmlab;

namespace {

MomentumWavefunction even_profile(double mass) {
  return MomentumWavefunction::gaussian(mass, 0.0, 0.3, 4.0, 2048);
}

MomentumWavefunction odd_profile(double mass) {
  return MomentumWavefunction::hermite_gaussian(1, mass, 0.0, 0.3, 4.0, 2048);
}

// random superposition of low Hermite modes on a shared grid
MomentumWavefunction random_profile(Rng& rng, double mass) {
  MomentumWavefunction out(mass, -4.0, 4.0, 1024);
  std::vector<MomentumWavefunction> modes;
  std::vector<Complex> coef;
  for (int k = 0; k < 4; ++k) {
    modes.push_back(
        MomentumWavefunction::hermite_gaussian(k, mass, 0.2, 0.5, 4.0, 1024));
    coef.push_back(rng.cnormal() / 10.0);
  }
  for (int i = 0; i < out.size(); ++i) {
    Complex v = 0.0;
    for (size_t k = 0; k < modes.size(); ++k) v += coef[k] * modes[k].value(i);
    out.set_value(i, v);
  }
  return out;
}

}  // namespace

TEST_CASE("grid and shell bookkeeping") {
  MomentumWavefunction f(2.0, -1.0, 1.0, 17);
  CHECK(f.size() == 17);
  CHECK(f.p(0) == -1.0);
  CHECK(std::abs(f.p(16) - 1.0) < 1e-14);
  CHECK(std::abs(f.step() - 0.125) < 1e-15);
  CHECK(std::abs(f.omega(8) - 2.0) < 1e-15);                  // p = 0
  CHECK(std::abs(f.omega(16) - std::sqrt(5.0)) < 1e-15);      // p = 1

  MomentumWavefunction g = f.with_mass(3.0);
  CHECK(g.mass() == 3.0);
  CHECK(g.same_grid(f));
  CHECK(std::abs(g.omega(8) - 3.0) < 1e-15);

  CHECK_THROWS_AS(MomentumWavefunction(0.0, -1.0, 1.0, 17), Error);
  CHECK_THROWS_AS(MomentumWavefunction(1.0, 1.0, -1.0, 17), Error);
  CHECK_THROWS_AS(MomentumWavefunction::hermite_gaussian(1, 1.0, 0.0, -0.5, 4.0, 64), Error);
}

TEST_CASE("invariant inner product") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    MomentumWavefunction f = random_profile(rng, 1.5);
    MomentumWavefunction g = random_profile(rng, 1.5);
    Complex fg = invariant_inner(f, g);
    Complex gf = invariant_inner(g, f);
    CHECK(std::abs(fg - std::conj(gf)) < 1e-12 * (1.0 + std::abs(fg)));

    Complex ff = invariant_inner(f, f);
    CHECK(std::abs(ff.imag()) < 1e-14 * (1.0 + ff.real()));
    CHECK(ff.real() > 0.0);
  }

  // the heavy-mass limit reduces the measure to 1/(2m)
  MomentumWavefunction f = even_profile(100.0);
  Complex heavy = invariant_inner(f, f);
  double flat = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    double w = (i == 0 || i == f.size() - 1) ? 0.5 : 1.0;
    flat += w * std::norm(f.value(i)) * f.step();
  }
  CHECK(std::abs(heavy.real() - flat / 200.0) < 0.01 * flat / 200.0);
}

TEST_CASE("parity controls the asymmetry") {
  // conj(f) g even: x acts symmetrically
  MomentumWavefunction e = even_profile(1.0);
  const double scale = std::abs(invariant_inner(e, e));
  CHECK(std::abs(adjoint_asymmetry(e, e)) < 1e-12 * scale);
  // an even profile is its own mirror image, so <x> vanishes too
  CHECK(std::abs(position_element(e, e)) < 1e-10 * scale);

  // odd cross term: the asymmetry survives
  MomentumWavefunction o = odd_profile(1.0);
  CHECK(std::abs(adjoint_asymmetry(e, o)) > 1e-4 * scale);
}

TEST_CASE("asymmetry against the derivative-free route") {
  Rng rng(11);
  for (double mass : {1.0, 4.0}) {
    MomentumWavefunction f = random_profile(rng, mass);
    MomentumWavefunction g = random_profile(rng, mass);
    Complex direct = adjoint_asymmetry(f, g);
    Complex oracle = asymmetry_oracle(f, g);
    CHECK(std::abs(direct - oracle) < 1e-6 * std::abs(oracle) + 1e-9);
  }
}

TEST_CASE("nonrelativistic limit restores symmetry") {
  MomentumWavefunction f =
      MomentumWavefunction::gaussian(1.0, 0.1, 0.2, 2.5, 2048);
  std::vector<double> masses = {1.0, 2.0, 4.0, 8.0, 16.0};
  LimitStudy study = limit_study(f, f, masses);

  REQUIRE(study.rows.size() == masses.size());
  for (size_t i = 0; i + 1 < study.rows.size(); ++i)
    CHECK(study.rows[i].ratio > study.rows[i + 1].ratio);

  // doubling the mass quarters the ratio
  for (size_t i = 0; i + 1 < study.rows.size(); ++i) {
    double quotient = study.rows[i].ratio / study.rows[i + 1].ratio;
    CHECK(quotient > 3.6);
    CHECK(quotient < 4.4);
  }
  CHECK(study.rows[2].ratio / study.rows[3].ratio == doctest::Approx(4.0).epsilon(0.05));

  CHECK(study.slope > -2.05);
  CHECK(study.slope < -1.90);

  // a wide profile sits farther from the asymptote than a narrow one
  MomentumWavefunction wide =
      MomentumWavefunction::gaussian(1.0, 1.0, 0.5, 7.0, 2048);
  LimitStudy ws = limit_study(wide, wide, masses);
  CHECK(std::abs(study.slope + 2.0) < std::abs(ws.slope + 2.0));

  std::vector<double> bad = {1.0, 1.0, 2.0};
  CHECK_THROWS_AS(limit_study(f, f, bad), Error);
}
