#include "qmlab/relative_state.hpp"

#include <cmath>

namespace qmlab {

ResolutionOfUnity::ResolutionOfUnity(std::vector<Projection> projections,
                                     std::vector<std::string> labels, double tolerance)
    : projections_(std::move(projections)), labels_(std::move(labels)) {
  if (projections_.empty()) throw Error("ResolutionOfUnity: no projections");
  if (labels_.size() != projections_.size())
    throw Error("ResolutionOfUnity: label count does not match projection count");
  const int d = projections_.front().dim();
  Mat sum = Mat::Zero(d, d);
  for (size_t i = 0; i < projections_.size(); ++i) {
    if (projections_[i].dim() != d) throw Error("ResolutionOfUnity: dimension mismatch");
    for (size_t j = i + 1; j < projections_.size(); ++j) {
      if (max_abs(projections_[i].mat() * projections_[j].mat()) > tolerance)
        throw Error("ResolutionOfUnity: branches '" + labels_[i] + "' and '" + labels_[j] +
                    "' are not orthogonal");
    }
    sum += projections_[i].mat();
  }
  if (max_abs_diff(sum, Mat::Identity(d, d)) > tolerance)
    throw Error("ResolutionOfUnity: projections do not sum to the identity");
}

double branch_weight(const DensityMatrix& rho, const Projection& q) {
  if (rho.dim() != q.dim()) throw Error("branch_weight: dimension mismatch");
  return (q.mat() * rho.mat()).trace().real();
}

RelativeState relative_density(const DensityMatrix& rho, const Projection& q,
                               const std::string& label, double floor) {
  const double w = branch_weight(rho, q);
  if (w < floor)
    throw EmptyBranchError("relative_density: branch '" + label + "' has weight " +
                           std::to_string(w) + " below floor");
  Mat conditioned = (q.mat() * rho.mat() * q.mat()) / w;
  // Re-symmetrize to suppress rounding asymmetry before the constructor's check.
  conditioned = 0.5 * (conditioned + Mat(conditioned.adjoint()));
  return RelativeState{DensityMatrix(ComplexMatrix(std::move(conditioned))), w, label};
}

Complex conditional_expectation(const DensityMatrix& rho, const Projection& q,
                                const ComplexMatrix& a, double floor) {
  if (a.dim() != rho.dim()) throw Error("conditional_expectation: dimension mismatch");
  const double w = branch_weight(rho, q);
  if (w < floor)
    throw EmptyBranchError("conditional_expectation: branch weight " + std::to_string(w) +
                           " below floor");
  return (q.mat() * a.mat() * q.mat() * rho.mat()).trace() / w;
}

DensityMatrix equivalent_mixture(const DensityMatrix& rho, const ResolutionOfUnity& r) {
  if (rho.dim() != r.dim()) throw Error("equivalent_mixture: dimension mismatch");
  Mat mix = Mat::Zero(rho.dim(), rho.dim());
  for (size_t i = 0; i < r.size(); ++i) {
    const Mat& q = r.projection(i).mat();
    mix += q * rho.mat() * q;
  }
  mix = 0.5 * (mix + Mat(mix.adjoint()));
  return DensityMatrix(ComplexMatrix(std::move(mix)));
}

bool commutes_with_all(const ComplexMatrix& a, const ResolutionOfUnity& r, double tolerance) {
  if (a.dim() != r.dim()) throw Error("commutes_with_all: dimension mismatch");
  for (size_t i = 0; i < r.size(); ++i) {
    const Mat& q = r.projection(i).mat();
    if (max_abs(a.mat() * q - q * a.mat()) > tolerance) return false;
  }
  return true;
}

}  // namespace qmlab
