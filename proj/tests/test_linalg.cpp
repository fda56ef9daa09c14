#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qmlab/linalg.hpp"
#include "qmlab/rng.hpp"

using namespace qmlab;

namespace {
const Complex I{0, 1};
}

TEST_CASE("complex matrix rejects malformed input") {
  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(ComplexMatrix{rect}, Error);

  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ComplexMatrix{bad}, Error);
}

TEST_CASE("hermiticity test sees the adjoint") {
  Mat h(2, 2);
  h << 1, Complex(0, 1), Complex(0, -1), 2;
  CHECK(ComplexMatrix(h).is_hermitian());
  h(1, 0) = Complex(0, 1);
  CHECK_FALSE(ComplexMatrix(h).is_hermitian());
}

TEST_CASE("density matrix validation") {
  Mat half = Mat::Identity(2, 2) * 0.5;
  CHECK_NOTHROW(DensityMatrix{ComplexMatrix(half)});

  // trace must be one
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix(Mat(Mat::Identity(2, 2)))}, Error);

  // positivity: eigenvalues {1.5, -0.5} trace 1
  Mat indef(2, 2);
  indef << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix(indef)}, Error);

  Vec psi(2);
  psi << Complex(0.6, 0), Complex(0, 0.8);
  DensityMatrix pure = DensityMatrix::pure(psi);
  CHECK(std::abs(pure.mat().trace() - Complex(1)) < 1e-14);
  CHECK(std::abs(pure.mat()(0, 0) - Complex(0.36)) < 1e-14);
}

TEST_CASE("projection validation") {
  Mat not_idem(2, 2);
  not_idem << 0.5, 0, 0, 0.5;
  CHECK_THROWS_AS(Projection{ComplexMatrix(not_idem)}, Error);

  Vec v(3);
  v << 1, Complex(0, 1), 0;
  Projection p = Projection::onto(v);
  CHECK(max_abs_diff(p.mat() * p.mat(), p.mat()) < 1e-14);
  CHECK(std::abs((p.mat() * v - v).norm()) < 1e-14);
}

TEST_CASE("projection onto a span") {
  Vec a(3), b(3);
  a << 1, 0, 0;
  b << 1, 1, 0;  // not orthogonal to a; span is the xy plane
  Projection p = Projection::onto_span({a, b});
  CHECK(std::abs(p.mat().trace() - Complex(2)) < 1e-13);
  Vec c(3);
  c << 0, 0, 1;
  CHECK((p.mat() * c).norm() < 1e-13);
}

TEST_CASE("hermitian eigensystem reconstructs the matrix") {
  Mat h(2, 2);
  h << 1, 1, 1, 1;
  EigResult r = eig_hermitian(ComplexMatrix(h));
  CHECK(std::abs(r.eigenvalues[0] - 0.0) < 1e-14);
  CHECK(std::abs(r.eigenvalues[1] - 2.0) < 1e-14);

  Rng rng(7);
  Mat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.cnormal();
  Mat herm = g + Mat(g.adjoint());
  EigResult rr = eig_hermitian(ComplexMatrix(herm));
  Mat d = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) d(i, i) = rr.eigenvalues[i];
  CHECK(max_abs_diff(rr.eigenvectors * d * rr.eigenvectors.adjoint(), herm) < 1e-12);
  CHECK(max_abs_diff(rr.eigenvectors.adjoint() * rr.eigenvectors,
                     Mat::Identity(4, 4)) < 1e-13);
}

TEST_CASE("matrix exponential of i t H") {
  Mat sz(2, 2);
  sz << 1, 0, 0, -1;
  const double t = 0.37;
  Mat u = expm_i(ComplexMatrix(sz), t).mat();
  CHECK(std::abs(u(0, 0) - std::exp(I * t)) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(-I * t)) < 1e-14);
  CHECK(std::abs(u(0, 1)) < 1e-14);

  CHECK(max_abs_diff(expm_i(ComplexMatrix(sz), 0.0).mat(), Mat::Identity(2, 2)) <
        1e-14);

  // group property and unitarity
  Mat h(2, 2);
  h << 0.3, Complex(0.1, -0.2), Complex(0.1, 0.2), -0.5;
  ComplexMatrix hm(h);
  Mat u1 = expm_i(hm, 0.4).mat(), u2 = expm_i(hm, 0.6).mat();
  CHECK(max_abs_diff(u1 * u2, expm_i(hm, 1.0).mat()) < 1e-13);
  CHECK(max_abs_diff(u1.adjoint() * u1, Mat::Identity(2, 2)) < 1e-14);

  Mat nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(expm_i(ComplexMatrix(nh), 1.0), Error);
}

TEST_CASE("gram schmidt orthonormalizes and flags dependence") {
  Vec a(3), b(3), c(3);
  a << 1, 1, 0;
  b << 1, 0, 1;
  c << 2, 1, 1;  // = a + b
  auto basis = gram_schmidt({a, b});
  REQUIRE(basis.size() == 2);
  CHECK(std::abs(basis[0].norm() - 1) < 1e-14);
  CHECK(std::abs(basis[0].dot(basis[1])) < 1e-14);
  CHECK_THROWS_AS(gram_schmidt({a, b, c}), Error);
}

TEST_CASE("deterministic generator streams") {
  Rng r1(42), r2(42);
  for (int i = 0; i < 100; ++i) CHECK(r1.uniform() == r2.uniform());
  Rng r3(42);
  for (int i = 0; i < 1000; ++i) {
    double u = r3.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng r4(1);
  for (int i = 0; i < 1000; ++i) {
    auto k = r4.integer(7);
    CHECK(k < 7);
  }
}
