#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qmlab/measurement.hpp"
#include "qmlab/random.hpp"
#include "qmlab/rng.hpp"

using namespace qmlab;

namespace {

const double kPi = std::acos(-1.0);
const Complex I{0, 1};

Projection spin_up() {
  Vec e = Vec::Zero(2);
  e(0) = 1;
  return Projection::onto(e);
}
Projection spin_dn() {
  Vec e = Vec::Zero(2);
  e(1) = 1;
  return Projection::onto(e);
}

// Place a subsystem block at (row, col) of the 3-block record space.
Mat embed(const Mat& b, int row, int col) {
  const int n = static_cast<int>(b.rows());
  Mat out = Mat::Zero(3 * n, 3 * n);
  out.block(row * n, col * n, n, n) = b;
  return out;
}

}  // namespace

TEST_CASE("mixing operators") {
  Projection p1 = spin_up(), p2 = spin_dn();

  auto [a1, a2] = mixing_operators(p1, p2, 0.0);
  CHECK(max_abs_diff(a1.mat(), p1.mat()) < 1e-15);
  CHECK(max_abs_diff(a2.mat(), p2.mat()) < 1e-15);

  for (double theta : {0.0, kPi / 8, kPi / 4, 1.1, 2.0}) {
    auto [b1, b2] = mixing_operators(p1, p2, theta);
    CHECK(b1.is_hermitian());
    CHECK(b2.is_hermitian());
    CHECK(max_abs_diff(b1.mat() * b2.mat(), b2.mat() * b1.mat()) < 1e-15);
    CHECK(max_abs_diff(b1.mat() * b1.mat() + b2.mat() * b2.mat(),
                       Mat::Identity(2, 2)) < 1e-15);
  }

  auto [c1, c2] = mixing_operators(p1, p2, kPi / 4);
  CHECK(max_abs_diff(c1.mat(), c2.mat()) < 1e-15);
}

TEST_CASE("model construction guards") {
  Projection p1 = spin_up(), p2 = spin_dn();
  // incomplete pair: p2 replaced by p1
  CHECK_THROWS_AS(MeasurementModel(p1, p1, 0.3, 1.0, ComplexMatrix::zero(2)),
                  Error);
  // free Hamiltonian must commute with the outcome projections
  Mat sx(2, 2);
  sx << 0, 1, 1, 0;
  CHECK_THROWS_AS(MeasurementModel(p1, p2, 0.3, 1.0, ComplexMatrix(sx)), Error);
  // interaction interval must have positive length
  CHECK_THROWS_AS(MeasurementModel::single_spin(0.3, 0.0), Error);
}

TEST_CASE("interaction phase is piecewise linear") {
  const double T = 2.0;
  CHECK(interaction_phase(-0.5, T) == 0.0);
  CHECK(interaction_phase(0.0, T) == 0.0);
  CHECK(std::abs(interaction_phase(0.5, T) - kPi / 8) < 1e-15);
  CHECK(std::abs(interaction_phase(1.0, T) - kPi / 4) < 1e-15);
  CHECK(std::abs(interaction_phase(2.0, T) - kPi / 2) < 1e-15);
  CHECK(std::abs(interaction_phase(9.0, T) - kPi / 2) < 1e-15);
}

TEST_CASE("hamiltonian matches the block layout") {
  const double T = 1.5, theta = 0.4;
  MeasurementModel m = MeasurementModel::single_spin(theta, T, 0.7, -0.2);
  const double g = kPi / (2 * T);

  Mat h0(2, 2);
  h0 << 0.7, 0, 0, -0.2;
  Mat expected = embed(h0, 0, 0) + embed(h0, 1, 1) + embed(h0, 2, 2);
  // outside the interval only the free part acts
  CHECK(max_abs_diff(hamiltonian(m, -0.1).mat(), expected) < 1e-15);
  CHECK(max_abs_diff(hamiltonian(m, T + 0.1).mat(), expected) < 1e-15);

  // inside, the xx row and column couple through i g A1, i g A2
  expected += embed(I * g * m.a1().mat(), 0, 2) + embed(I * g * m.a2().mat(), 1, 2) +
              embed(-I * g * m.a1().mat(), 2, 0) + embed(-I * g * m.a2().mat(), 2, 1);
  CHECK(max_abs_diff(hamiltonian(m, 0.6 * T).mat(), expected) < 1e-14);
  CHECK(hamiltonian(m, 0.6 * T).is_hermitian());
}

TEST_CASE("interaction spectrum splits each level by the gap") {
  const double T = 0.8;
  MeasurementModel m = MeasurementModel::single_spin(0.25, T, 0.3, -0.1);
  EigResult r = eig_hermitian(hamiltonian(m, T / 2));
  const double g = kPi / (2 * T);
  std::vector<double> expected = {-0.1 - g, -0.1, -0.1 + g, 0.3 - g, 0.3, 0.3 + g};
  std::sort(expected.begin(), expected.end());
  for (size_t i = 0; i < expected.size(); ++i)
    CHECK(std::abs(r.eigenvalues[i] - expected[i]) < 1e-12);
}

TEST_CASE("closed-form eigenvectors carry the recorded pairing") {
  const double T = 1.0;
  MeasurementModel m = MeasurementModel::single_spin(0.3, T, 0.5, 0.5);
  CHECK(m.sign_pairing() == -1);

  Vec w = Vec::Zero(2);
  w(0) = 1;
  EigenTriplet et = eigen_system(m, w, 0.5);
  Mat h = hamiltonian(m, T / 2).mat();

  // orthonormal triple
  CHECK(std::abs(et.zero.norm() - 1) < 1e-14);
  CHECK(std::abs(et.plus.norm() - 1) < 1e-14);
  CHECK(std::abs(et.zero.dot(et.plus)) < 1e-14);
  CHECK(std::abs(et.plus.dot(et.minus)) < 1e-14);

  CHECK((h * et.zero - et.lambda_zero * et.zero).norm() < 1e-13);
  CHECK((h * et.plus - et.lambda_plus * et.plus).norm() < 1e-13);
  CHECK((h * et.minus - et.lambda_minus * et.minus).norm() < 1e-13);
  CHECK(std::abs(et.lambda_plus - (0.5 - kPi / 2)) < 1e-13);
  CHECK(std::abs(et.lambda_minus - (0.5 + kPi / 2)) < 1e-13);

  // swapping the pairing must break the eigenvalue equation by order pi/T
  Vec flipped = et.plus;
  double bad = (h * flipped - et.lambda_minus * flipped).norm();
  CHECK(bad > 0.5);

  // an arbitrary non-eigenvector of h0 is rejected
  Vec mixed(2);
  MeasurementModel split = MeasurementModel::single_spin(0.3, T, 0.5, -0.5);
  mixed << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK_THROWS_AS(eigen_system(split, mixed, 0.5), Error);
}

TEST_CASE("propagator closed form against the exponential route") {
  const double T = 1.3;
  for (double theta : {0.0, 0.3 * kPi}) {
    for (double e_up : {0.0, 0.5}) {
      MeasurementModel m = MeasurementModel::single_spin(theta, T, e_up, -0.25);
      const Mat lift = replicate_blocks(m.h0().mat());
      const ComplexMatrix lift_cm(lift);
      const ComplexMatrix h_int(hamiltonian(m, T / 2).mat() - lift);
      for (double t : {-0.4, 0.0, 0.2, T / 2, T, 1.7 * T}) {
        const Mat u = propagator(m, t).mat();
        const double tau = std::clamp(t, 0.0, T);
        const Mat oracle = expm_i(lift_cm, t).mat() *
                           expm_i(h_int, m.sign_pairing() * tau).mat();
        CHECK(max_abs_diff(u, oracle) < 1e-12);
        CHECK(max_abs_diff(u.adjoint() * u, Mat::Identity(6, 6)) < 1e-13);
      }
    }
  }
}

TEST_CASE("propagator endpoints") {
  const double T = 1.0;
  MeasurementModel m = MeasurementModel::single_spin(0.35, T);
  CHECK(max_abs_diff(propagator(m, 0.0).mat(), Mat::Identity(6, 6)) < 1e-14);

  // before the interaction only the free part acts; h0 = 0 here
  CHECK(max_abs_diff(propagator(m, -2.0).mat(), Mat::Identity(6, 6)) < 1e-14);

  // at t >= T the xx content has fully fed the records:
  // (0, 0, w) -> (A1 w, A2 w, 0)
  Vec w(2);
  w << 0.6, Complex(0, 0.8);
  Vec in = Vec::Zero(6);
  in.segment(4, 2) = w;
  Vec out = propagator(m, T).mat() * in;
  Vec expected = Vec::Zero(6);
  expected.segment(0, 2) = m.a1().mat() * w;
  expected.segment(2, 2) = m.a2().mat() * w;
  CHECK((out - expected).norm() < 1e-13);
}

TEST_CASE("evolved state reproduces the entrywise block table") {
  const double T = 2.0, theta = 0.3, t = 0.6;
  MeasurementModel m = MeasurementModel::single_spin(theta, T, 0.2, -0.4);
  Rng rng(23);
  DensityMatrix rho0 = random_density(rng, 2);

  BlockState state = evolve(m, rho0, t);
  const double phi = interaction_phase(t, T);
  const double s = std::sin(phi), c = std::cos(phi);
  const Mat u0 = expm_i(m.h0(), t).mat();
  const Mat rho_t = u0 * rho0.mat() * u0.adjoint();
  const Mat ops[3] = {m.a1().mat(), m.a2().mat(), Mat::Identity(2, 2)};
  const double coef[3] = {s, s, c};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Mat expected = coef[j] * coef[k] * ops[j] * rho_t * ops[k];
      CHECK(max_abs_diff(state.block(static_cast<Record>(j),
                                     static_cast<Record>(k)),
                         expected) < 1e-13);
    }

  // after the interval the xx row and column are empty
  BlockState late = evolve(m, rho0, 1.2 * T);
  for (int j = 0; j < 3; ++j) {
    CHECK(max_abs(late.block(static_cast<Record>(j), Record::xx)) < 1e-15);
    CHECK(max_abs(late.block(Record::xx, static_cast<Record>(j))) < 1e-15);
  }
}

TEST_CASE("record likelihoods through the interaction") {
  const double T = 1.0;
  MeasurementModel m = MeasurementModel::single_spin(0.7, T);
  Mat half = Mat::Identity(2, 2) * 0.5;
  DensityMatrix rho0{ComplexMatrix(half)};

  BlockState at0 = evolve(m, rho0, 0.0);
  CHECK(std::abs(record_likelihood(at0, Record::up) - 0.0) < 1e-14);
  CHECK(std::abs(record_likelihood(at0, Record::dn) - 0.0) < 1e-14);
  CHECK(std::abs(record_likelihood(at0, Record::xx) - 1.0) < 1e-14);

  BlockState mid = evolve(m, rho0, T / 2);  // phi = pi/4
  CHECK(std::abs(record_likelihood(mid, Record::up) - 0.25) < 1e-13);
  CHECK(std::abs(record_likelihood(mid, Record::dn) - 0.25) < 1e-13);
  CHECK(std::abs(record_likelihood(mid, Record::xx) - 0.50) < 1e-13);

  BlockState end = evolve(m, rho0, T);  // phi = pi/2
  CHECK(std::abs(record_likelihood(end, Record::up) - 0.5) < 1e-13);
  CHECK(std::abs(record_likelihood(end, Record::dn) - 0.5) < 1e-13);
  CHECK(record_likelihood(end, Record::xx) < 1e-30);
}

TEST_CASE("conditional outcome tables") {
  const double T = 1.0;
  Mat half = Mat::Identity(2, 2) * 0.5;
  DensityMatrix rho0{ComplexMatrix(half)};

  // aligned measurement: the record determines the outcome
  MeasurementModel aligned = MeasurementModel::single_spin(0.0, T);
  BlockState mid = evolve(aligned, rho0, T / 2);
  CHECK(std::abs(conditional_spin_likelihood(aligned, mid, Record::up, 1) - 1.0) <
        1e-13);
  CHECK(std::abs(conditional_spin_likelihood(aligned, mid, Record::up, 2) - 0.0) <
        1e-13);
  CHECK(std::abs(conditional_spin_likelihood(aligned, mid, Record::dn, 1) - 0.0) <
        1e-13);
  CHECK(std::abs(conditional_spin_likelihood(aligned, mid, Record::xx, 1) - 0.5) <
        1e-13);

  // mixing angle shifts the table to cos^2 / sin^2
  const double theta = 0.3;
  MeasurementModel mixed = MeasurementModel::single_spin(theta, T);
  BlockState ms = evolve(mixed, rho0, 0.4 * T);
  const double c2 = std::cos(theta) * std::cos(theta);
  CHECK(std::abs(conditional_spin_likelihood(mixed, ms, Record::up, 1) - c2) <
        1e-13);
  CHECK(std::abs(conditional_spin_likelihood(mixed, ms, Record::dn, 2) - c2) <
        1e-13);

  // the table is insensitive to when the record is read
  BlockState late = evolve(mixed, rho0, 3.0 * T);
  CHECK(std::abs(conditional_spin_likelihood(mixed, late, Record::up, 1) - c2) <
        1e-13);

  // empty branches are refused
  BlockState before = evolve(mixed, rho0, -1.0);
  CHECK_THROWS_AS(conditional_spin_likelihood(mixed, before, Record::up, 1),
                  EmptyBranchError);
  CHECK_THROWS_AS(conditional_spin_likelihood(mixed, late, Record::xx, 1),
                  EmptyBranchError);
}

TEST_CASE("record projections resolve the identity") {
  MeasurementModel m = MeasurementModel::single_spin(0.2, 1.0);
  ResolutionOfUnity r = record_resolution(m);
  REQUIRE(r.size() == 3);
  CHECK(r.label(0) == "up");
  CHECK(r.label(1) == "dn");
  CHECK(r.label(2) == "xx");
  Mat sum = Mat::Zero(6, 6);
  for (size_t i = 0; i < 3; ++i) sum += r.projection(i).mat();
  CHECK(max_abs_diff(sum, Mat::Identity(6, 6)) < 1e-14);
}

TEST_CASE("singlet pair: records pin the partner") {
  const double T = 1.0;
  MeasurementModel m = MeasurementModel::epr_pair(0.0, T);
  CHECK(m.subsystem_dim() == 4);

  EprTable mid = epr_scenario(m, T / 2);
  CHECK(std::abs(mid.branches[0].likelihood - 0.25) < 1e-13);
  CHECK(std::abs(mid.branches[1].likelihood - 0.25) < 1e-13);
  CHECK(std::abs(mid.branches[2].likelihood - 0.50) < 1e-13);
  CHECK(std::abs(mid.branches[0].b_dn - 1.0) < 1e-13);
  CHECK(std::abs(mid.branches[0].b_up - 0.0) < 1e-13);
  CHECK(std::abs(mid.branches[1].b_up - 1.0) < 1e-13);
  for (double s : mid.total_spin) CHECK(std::abs(s) < 1e-13);

  // before the interaction the record branches are empty
  EprTable at0 = epr_scenario(m, 0.0);
  CHECK(std::isnan(at0.branches[0].b_dn));
  CHECK(std::abs(at0.branches[2].likelihood - 1.0) < 1e-13);

  // a tilted observer still conserves total spin, but the partner
  // correlation weakens to cos^2
  const double theta = 0.4;
  MeasurementModel tilted = MeasurementModel::epr_pair(theta, T);
  EprTable tt = epr_scenario(tilted, 0.7 * T);
  const double c2 = std::cos(theta) * std::cos(theta);
  CHECK(std::abs(tt.branches[0].b_dn - c2) < 1e-13);
  CHECK(std::abs(tt.branches[0].b_up - (1 - c2)) < 1e-13);
  for (double s : tt.total_spin) CHECK(std::abs(s) < 1e-12);
  CHECK(tilted.sign_pairing() == -1);
}
