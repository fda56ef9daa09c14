#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmlab {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Default tolerances. "exact" guards identities that hold to rounding error,
// "quadrature" guards discretized integrals. Both can be overridden per call
// and from the command line.
namespace tol {
inline constexpr double exact = 1e-10;
inline constexpr double quadrature = 1e-6;
// Branch weights below this are treated as zero; conditioning on such a
// branch is an error rather than a division by noise.
inline constexpr double branch_floor = 1e-12;
}  // namespace tol

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when conditioning on a branch whose weight is below tol::branch_floor.
struct EmptyBranchError : Error {
  using Error::Error;
};

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  return max_abs(a - b);
}

// Square complex matrix with finite entries. The thin validation layer keeps
// NaNs and shape mismatches from propagating silently through long products.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(Mat m);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  ComplexMatrix adjoint() const { return ComplexMatrix(m_.adjoint()); }
  bool is_hermitian(double tolerance = tol::exact) const;

 private:
  Mat m_;
};

// Hermitian, positive semidefinite, unit trace. Validated on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tolerance = tol::exact);

  int dim() const { return m_.dim(); }
  const Mat& mat() const { return m_.mat(); }
  const ComplexMatrix& matrix() const { return m_; }

  static DensityMatrix pure(const Vec& psi);

 private:
  ComplexMatrix m_;
};

// Orthogonal projection: P = P* = P^2, validated on construction.
class Projection {
 public:
  explicit Projection(ComplexMatrix m, double tolerance = tol::exact);

  int dim() const { return m_.dim(); }
  const Mat& mat() const { return m_.mat(); }
  const ComplexMatrix& matrix() const { return m_; }

  // Projection onto span{v} for a nonzero vector v.
  static Projection onto(const Vec& v);
  // Projection onto the orthonormalized span of the given vectors.
  static Projection onto_span(const std::vector<Vec>& vs);

 private:
  ComplexMatrix m_;
};

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  Mat eigenvectors;                 // columns, orthonormal
};

// Spectral decomposition of a Hermitian matrix. Throws if the input fails
// the hermiticity check at the given tolerance.
EigResult eig_hermitian(const ComplexMatrix& m, double tolerance = tol::exact);

// exp(i t H) for Hermitian H via the spectral decomposition. The result is
// unitary to rounding error by construction.
ComplexMatrix expm_i(const ComplexMatrix& h, double t, double tolerance = tol::exact);

// Modified Gram-Schmidt. Throws Error if a residual norm drops below
// `threshold` times the original vector norm (rank deficiency).
std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs, double threshold = 1e-12);

}  // namespace qmlab
