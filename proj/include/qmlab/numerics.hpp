#pragma once

#include <vector>

#include "qmlab/linalg.hpp"

namespace qmlab {

// Trapezoid rule on uniformly spaced samples.
double trapezoid(const std::vector<double>& f, double h);
Complex trapezoid(const std::vector<Complex>& f, double h);

// Derivative of uniformly spaced samples by central differences of the given
// order (4 or 6), with one-sided stencils of matching order near the ends.
std::vector<Complex> derivative_uniform(const std::vector<Complex>& f, double h, int order = 4);

// Least-squares line y = slope x + intercept.
struct LinearFit {
  double slope;
  double intercept;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Solve a complex tridiagonal system in place: lower/diag/upper are the three
// bands (lower[0] and upper[n-1] unused). rhs becomes the solution.
void solve_tridiagonal(const std::vector<Complex>& lower, std::vector<Complex> diag,
                       const std::vector<Complex>& upper, std::vector<Complex>& rhs);

}  // namespace qmlab
