#pragma once

#include <string>
#include <vector>

#include "qmlab/linalg.hpp"

namespace qmlab {

// Finite family of mutually orthogonal projections summing to the identity.
// Labels are opaque strings attached to branches; they carry no semantics.
class ResolutionOfUnity {
 public:
  ResolutionOfUnity(std::vector<Projection> projections, std::vector<std::string> labels,
                    double tolerance = tol::exact);

  size_t size() const { return projections_.size(); }
  int dim() const { return projections_.front().dim(); }
  const Projection& projection(size_t i) const { return projections_.at(i); }
  const std::string& label(size_t i) const { return labels_.at(i); }

 private:
  std::vector<Projection> projections_;
  std::vector<std::string> labels_;
};

// State conditioned on one branch, with the weight of that branch.
struct RelativeState {
  DensityMatrix state;
  double weight;
  std::string label;
};

// Weight of the branch selected by Q: Trace(Q rho).
double branch_weight(const DensityMatrix& rho, const Projection& q);

// Normalized conditional state c Q rho Q with c = 1/Trace(Q rho).
// Throws EmptyBranchError if the branch weight is below `floor`.
RelativeState relative_density(const DensityMatrix& rho, const Projection& q,
                               const std::string& label = "",
                               double floor = tol::branch_floor);

// Conditional expectation Trace(Q A Q rho) / Trace(Q rho).
Complex conditional_expectation(const DensityMatrix& rho, const Projection& q,
                                const ComplexMatrix& a, double floor = tol::branch_floor);

// Mixture sum_i Q_i rho Q_i over all branches of the resolution. Agrees with
// rho in expectation for every operator commuting with the resolution.
DensityMatrix equivalent_mixture(const DensityMatrix& rho, const ResolutionOfUnity& r);

// True if [a, Q_i] vanishes for every branch at the given tolerance.
bool commutes_with_all(const ComplexMatrix& a, const ResolutionOfUnity& r,
                       double tolerance = tol::exact);

}  // namespace qmlab
