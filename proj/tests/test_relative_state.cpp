#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmlab/random.hpp"
#include "qmlab/relative_state.hpp"
#include "qmlab/rng.hpp"

using namespace qmlab;

namespace {

ResolutionOfUnity two_level_basis() {
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1(0) = 1;
  e2(1) = 1;
  return ResolutionOfUnity({Projection::onto(e1), Projection::onto(e2)},
                           {"up", "dn"});
}

}  // namespace

TEST_CASE("resolution validation") {
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1(0) = 1;
  e2(1) = 1;
  CHECK_NOTHROW(two_level_basis());

  // overlapping branches
  Vec plus = (e1 + e2) / std::sqrt(2.0);
  CHECK_THROWS_AS(ResolutionOfUnity({Projection::onto(e1), Projection::onto(plus)},
                                    {"a", "b"}),
                  Error);
  // incomplete
  CHECK_THROWS_AS(ResolutionOfUnity({Projection::onto(e1)}, {"a"}), Error);
}

TEST_CASE("branch weight and conditioning") {
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1(0) = 1;
  e2(1) = 1;
  Vec psi = 0.6 * e1 + 0.8 * e2;
  DensityMatrix rho = DensityMatrix::pure(psi);
  Projection q1 = Projection::onto(e1);

  CHECK(std::abs(branch_weight(rho, q1) - 0.36) < 1e-14);

  RelativeState rel = relative_density(rho, q1, "up");
  CHECK(rel.label == "up");
  CHECK(std::abs(rel.weight - 0.36) < 1e-14);
  CHECK(std::abs(rel.state.mat()(0, 0) - Complex(1)) < 1e-13);

  // empty branch
  DensityMatrix pinned = DensityMatrix::pure(e2);
  CHECK_THROWS_AS(relative_density(pinned, q1), EmptyBranchError);
  CHECK_THROWS_AS(conditional_expectation(pinned, q1, ComplexMatrix::identity(2)),
                  EmptyBranchError);
}

TEST_CASE("conditional expectation agrees with the conditioned state") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.integer(7));
    const int blocks = 2 + static_cast<int>(rng.integer(std::min(dim, 4) - 1));
    SampledResolution sr = random_resolution(rng, dim, blocks);
    DensityMatrix rho = random_density(rng, dim);
    ComplexMatrix a = random_hermitian(rng, dim);

    const Projection& q = sr.resolution.projection(trial % blocks);
    if (branch_weight(rho, q) < 1e-8) continue;
    Complex direct = conditional_expectation(rho, q, a);
    RelativeState rel = relative_density(rho, q);
    Complex via_state = (a.mat() * rel.state.mat()).trace();
    CHECK(std::abs(direct - via_state) < 1e-12);
    // conditional expectations of Hermitian observables are real
    CHECK(std::abs(direct.imag()) < 1e-12);
  }
}

TEST_CASE("branch mixture agrees with the state on the commutant") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 2 + static_cast<int>(rng.integer(9));
    const int blocks = 2 + static_cast<int>(rng.integer(std::min(dim, 5) - 1));
    SampledResolution sr = random_resolution(rng, dim, blocks);
    DensityMatrix rho = random_density(rng, dim);
    ComplexMatrix a = random_commutant_element(rng, sr);
    REQUIRE(commutes_with_all(a, sr.resolution));

    DensityMatrix mix = equivalent_mixture(rho, sr.resolution);
    CHECK(std::abs(mix.mat().trace() - Complex(1)) < 1e-12);
    Complex lhs = (a.mat() * rho.mat()).trace();
    Complex rhs = (a.mat() * mix.mat()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("mixture equals the weighted sum of conditioned states") {
  Rng rng(19);
  SampledResolution sr = random_resolution(rng, 6, 3);
  DensityMatrix rho = random_density(rng, 6);
  Mat sum = Mat::Zero(6, 6);
  for (size_t i = 0; i < sr.resolution.size(); ++i) {
    RelativeState rel = relative_density(rho, sr.resolution.projection(i));
    sum += rel.weight * rel.state.mat();
  }
  CHECK(max_abs_diff(sum, equivalent_mixture(rho, sr.resolution).mat()) < 1e-12);
}

TEST_CASE("non-commuting observable separates state from mixture") {
  ResolutionOfUnity basis = two_level_basis();
  Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  DensityMatrix pure = DensityMatrix::pure(plus);

  Mat flip(2, 2);
  flip << 0, 1, 1, 0;
  ComplexMatrix off(flip);
  CHECK_FALSE(commutes_with_all(off, basis));

  DensityMatrix mixed = equivalent_mixture(pure, basis);
  double gap = std::abs((off.mat() * pure.mat()).trace() -
                        (off.mat() * mixed.mat()).trace());
  CHECK(gap > 0.999);  // exactly 1 for this pair
  CHECK(gap < 1.001);
}

TEST_CASE("random samplers produce what they claim") {
  Rng rng(5);
  Mat u = random_unitary(rng, 5);
  CHECK(max_abs_diff(u.adjoint() * u, Mat::Identity(5, 5)) < 1e-12);

  DensityMatrix rho = random_density(rng, 5);
  EigResult er = eig_hermitian(rho.matrix());
  for (double ev : er.eigenvalues) CHECK(ev > -1e-12);

  ComplexMatrix h = random_hermitian(rng, 4);
  CHECK(h.is_hermitian());

  SampledResolution sr = random_resolution(rng, 9, 4);
  REQUIRE(sr.resolution.size() == 4);
  Mat total = Mat::Zero(9, 9);
  for (size_t i = 0; i < 4; ++i) {
    const Mat& q = sr.resolution.projection(i).mat();
    CHECK(max_abs_diff(q * q, q) < 1e-12);
    total += q;
  }
  CHECK(max_abs_diff(total, Mat::Identity(9, 9)) < 1e-12);
}
