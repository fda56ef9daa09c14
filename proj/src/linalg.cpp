#include "qmlab/linalg.hpp"

#include <cmath>

namespace qmlab {

namespace {

bool all_finite(const Mat& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

}  // namespace

ComplexMatrix::ComplexMatrix(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw Error("ComplexMatrix: matrix must be square, got " + std::to_string(m_.rows()) +
                "x" + std::to_string(m_.cols()));
  if (!all_finite(m_)) throw Error("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  return ComplexMatrix(Mat::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::zero(int dim) {
  return ComplexMatrix(Mat::Zero(dim, dim));
}

bool ComplexMatrix::is_hermitian(double tolerance) const {
  return max_abs_diff(m_, m_.adjoint()) <= tolerance;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
  if (!m_.is_hermitian(tolerance)) throw Error("DensityMatrix: not Hermitian");
  const double tr_err = std::abs(m_.mat().trace() - Complex(1.0, 0.0));
  if (tr_err > tolerance)
    throw Error("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Mat> es(m_.mat(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance)
    throw Error("DensityMatrix: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  const double n = psi.norm();
  if (n <= 0.0) throw Error("DensityMatrix::pure: zero vector");
  const Vec u = psi / n;
  return DensityMatrix(ComplexMatrix(u * u.adjoint()));
}

Projection::Projection(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
  if (!m_.is_hermitian(tolerance)) throw Error("Projection: not Hermitian");
  if (max_abs_diff(m_.mat() * m_.mat(), m_.mat()) > tolerance)
    throw Error("Projection: not idempotent");
}

Projection Projection::onto(const Vec& v) {
  const double n = v.norm();
  if (n <= 0.0) throw Error("Projection::onto: zero vector");
  const Vec u = v / n;
  return Projection(ComplexMatrix(u * u.adjoint()));
}

Projection Projection::onto_span(const std::vector<Vec>& vs) {
  const std::vector<Vec> basis = gram_schmidt(vs);
  Mat p = Mat::Zero(basis.front().size(), basis.front().size());
  for (const Vec& u : basis) p += u * u.adjoint();
  return Projection(ComplexMatrix(std::move(p)));
}

EigResult eig_hermitian(const ComplexMatrix& m, double tolerance) {
  if (!m.is_hermitian(tolerance)) throw Error("eig_hermitian: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(m.mat());
  if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
  EigResult out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.dim());
  out.eigenvectors = es.eigenvectors();
  return out;
}

ComplexMatrix expm_i(const ComplexMatrix& h, double t, double tolerance) {
  if (!h.is_hermitian(tolerance)) throw Error("expm_i: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.mat());
  if (es.info() != Eigen::Success) throw Error("expm_i: eigensolver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  Vec phases(h.dim());
  for (int k = 0; k < h.dim(); ++k) phases(k) = std::polar(1.0, t * lam(k));
  return ComplexMatrix(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs, double threshold) {
  std::vector<Vec> basis;
  basis.reserve(vs.size());
  for (size_t i = 0; i < vs.size(); ++i) {
    const double original = vs[i].norm();
    if (original <= 0.0) throw Error("gram_schmidt: zero vector at index " + std::to_string(i));
    Vec r = vs[i];
    // Two passes of re-orthogonalization keep the basis orthonormal even for
    // nearly dependent inputs that are still above the rank threshold.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : basis) r -= u.dot(r) * u;
    const double residual = r.norm();
    if (residual < threshold * original)
      throw Error("gram_schmidt: rank deficiency at index " + std::to_string(i) +
                  " (residual ratio " + std::to_string(residual / original) + ")");
    basis.push_back(r / residual);
  }
  return basis;
}

}  // namespace qmlab
