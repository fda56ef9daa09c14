#include "qmlab/numerics.hpp"

#include <cmath>

namespace qmlab {

double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) throw Error("trapezoid: need at least two samples");
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

Complex trapezoid(const std::vector<Complex>& f, double h) {
  if (f.size() < 2) throw Error("trapezoid: need at least two samples");
  Complex s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

std::vector<Complex> derivative_uniform(const std::vector<Complex>& f, double h, int order) {
  if (order != 4 && order != 6) throw Error("derivative_uniform: order must be 4 or 6");
  const size_t n = f.size();
  const size_t margin = order == 4 ? 2 : 3;
  if (n < 2 * margin + 1) throw Error("derivative_uniform: too few samples");
  std::vector<Complex> d(n);
  if (order == 4) {
    for (size_t i = 2; i + 2 < n; ++i)
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  } else {
    for (size_t i = 3; i + 3 < n; ++i)
      d[i] = (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
              f[i + 3]) /
             (60.0 * h);
  }
  // Edges: fourth-order one-sided stencils. In every use here the states
  // decay to rounding level before the boundary, so edge order is immaterial.
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  d[n - 1] =
      (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) /
      (12.0 * h);
  d[n - 2] =
      (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) /
      (12.0 * h);
  if (margin == 3) {
    d[2] = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    d[n - 3] = (f[n - 5] - 8.0 * f[n - 4] + 8.0 * f[n - 2] - f[n - 1]) / (12.0 * h);
  }
  return d;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("linear_fit: need matched samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw Error("linear_fit: degenerate abscissae");
  return LinearFit{(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

void solve_tridiagonal(const std::vector<Complex>& lower, std::vector<Complex> diag,
                       const std::vector<Complex>& upper, std::vector<Complex>& rhs) {
  const size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw Error("solve_tridiagonal: band size mismatch");
  for (size_t i = 1; i < n; ++i) {
    const Complex m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace qmlab
