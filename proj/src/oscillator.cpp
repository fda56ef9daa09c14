#include "qmlab/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace qmlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void OscillatorSpec::validate() const {
  if (!(mass > 0.0) || !(stiffness > 0.0) || !(hbar > 0.0))
    throw Error("OscillatorSpec: mass, stiffness and hbar must be positive");
}

void PacketSpec::validate() const {
  if (!(amplitude > 0.0)) throw Error("PacketSpec: amplitude must be positive");
}

GridFunction::GridFunction(GridKind kind, std::vector<double> x, double step)
    : kind_(kind), x_(std::move(x)), v_(x_.size(), Complex(0.0, 0.0)), step_(step) {}

GridFunction GridFunction::uniform(double x0, double x1, int n) {
  if (n < 8 || !(x1 > x0)) throw Error("GridFunction::uniform: bad range or size");
  std::vector<double> x(n);
  const double h = (x1 - x0) / (n - 1);
  for (int i = 0; i < n; ++i) x[i] = x0 + h * i;
  return GridFunction(GridKind::uniform, std::move(x), h);
}

GridFunction GridFunction::logarithmic(double x_min, double x_max, int n) {
  if (n < 8 || !(x_min > 0.0) || !(x_max > x_min))
    throw Error("GridFunction::logarithmic: bad range or size");
  std::vector<double> x(n);
  const double u0 = std::log(x_min);
  const double h = (std::log(x_max) - u0) / (n - 1);
  for (int i = 0; i < n; ++i) x[i] = std::exp(u0 + h * i);
  return GridFunction(GridKind::logarithmic, std::move(x), h);
}

Complex GridFunction::integral() const {
  if (kind_ == GridKind::uniform) return trapezoid(v_, step_);
  // dx = x du on the log grid.
  std::vector<Complex> g(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) g[i] = v_[i] * x_[i];
  return trapezoid(g, step_);
}

double GridFunction::norm2() const {
  std::vector<double> g(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) {
    g[i] = std::norm(v_[i]);
    if (kind_ == GridKind::logarithmic) g[i] *= x_[i];
  }
  return trapezoid(g, step_);
}

Complex GridFunction::inner(const GridFunction& g) const {
  if (g.kind_ != kind_ || g.x_.size() != x_.size() || g.step_ != step_ || g.x_[0] != x_[0])
    throw Error("GridFunction::inner: grids differ");
  std::vector<Complex> w(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) {
    w[i] = std::conj(v_[i]) * g.v_[i];
    if (kind_ == GridKind::logarithmic) w[i] *= x_[i];
  }
  return trapezoid(w, step_);
}

GridFunction GridFunction::derivative(int order) const {
  const std::vector<Complex> du = derivative_uniform(v_, step_, order);
  GridFunction out = *this;
  for (size_t i = 0; i < v_.size(); ++i)
    out.v_[i] = kind_ == GridKind::uniform ? du[i] : du[i] / x_[i];  // d/dx = (1/x) d/du
  return out;
}

Complex minimum_packet(const OscillatorSpec& spec, const PacketSpec& packet, double t,
                       double x) {
  spec.validate();
  packet.validate();
  const double w = spec.omega();
  const double s2 = spec.packet_variance();
  const double a = packet.amplitude;
  const double beta = packet.momentum_amplitude(spec);
  const double center = a * std::cos(w * t);
  const double phase_t =
      0.5 * w * t - spec.stiffness * a * a / (4.0 * spec.hbar * w) * std::sin(2.0 * w * t);
  const double gauss = std::exp(-(x - center) * (x - center) / (4.0 * s2));
  const Complex phase = std::polar(1.0, -beta * x * std::sin(w * t) / spec.hbar - phase_t);
  return std::pow(2.0 * kPi * s2, -0.25) * gauss * phase;
}

GridFunction sample_minimum_packet(const OscillatorSpec& spec, const PacketSpec& packet,
                                   double t, double x0, double x1, int n) {
  GridFunction g = GridFunction::uniform(x0, x1, n);
  for (int i = 0; i < n; ++i) g.set_value(i, minimum_packet(spec, packet, t, g.x(i)));
  return g;
}

PacketMoments expectations_closed_form(const OscillatorSpec& spec, const PacketSpec& packet,
                                       double t) {
  spec.validate();
  packet.validate();
  const double w = spec.omega();
  const double s2 = spec.packet_variance();
  PacketMoments m;
  m.mean_x = packet.amplitude * std::cos(w * t);
  m.mean_p = -packet.momentum_amplitude(spec) * std::sin(w * t);
  m.var_x = s2;
  m.var_p = spec.hbar * spec.hbar / (4.0 * s2);
  m.uncertainty = 0.5 * spec.hbar;
  return m;
}

PacketMoments quadrature_expectations(const GridFunction& state, double hbar) {
  const double n2 = state.norm2();
  if (n2 <= 0.0) throw Error("quadrature_expectations: zero state");
  const GridFunction d = state.derivative(6);

  GridFunction xf = state, xxf = state;
  for (int i = 0; i < state.size(); ++i) {
    const double x = state.x(i);
    xf.set_value(i, x * state.value(i));
    xxf.set_value(i, x * x * state.value(i));
  }
  PacketMoments m;
  m.mean_x = state.inner(xf).real() / n2;
  m.var_x = state.inner(xxf).real() / n2 - m.mean_x * m.mean_x;
  // Re<-i hbar d/dx> = hbar Im(int conj(s) s').
  m.mean_p = hbar * state.inner(d).imag() / n2;
  const double mean_p2 = hbar * hbar * d.inner(d).real() / n2;  // <P^2> by parts
  m.var_p = mean_p2 - m.mean_p * m.mean_p;
  m.uncertainty = std::sqrt(std::max(0.0, m.var_x * m.var_p));
  return m;
}

double x3p_closed_form(const OscillatorSpec& spec, const PacketSpec& packet, double t) {
  spec.validate();
  packet.validate();
  const double w = spec.omega();
  const double a = packet.amplitude;
  const double s2 = spec.packet_variance();
  const double c = std::cos(w * t);
  return -std::sqrt(spec.mass * spec.stiffness) * a * std::sin(w * t) *
         (a * a * a * c * c * c + 3.0 * a * s2 * c);
}

Complex x3p_quadrature(const GridFunction& state, double hbar) {
  const double n2 = state.norm2();
  if (std::abs(n2 - 1.0) > 1e-6)
    std::cerr << "x3p_quadrature: state norm deviates from 1 by " << std::abs(n2 - 1.0)
              << "; grid may under-resolve the state\n";
  const GridFunction d = state.derivative(4);
  GridFunction g = state;
  for (int i = 0; i < state.size(); ++i) {
    const double x = state.x(i);
    g.set_value(i, x * x * x * d.value(i) + 1.5 * x * x * state.value(i));
  }
  return Complex(0.0, -hbar) * state.inner(g);
}

ClassicalPoint classical_trajectory(const OscillatorSpec& spec, double x0, double p0,
                                    double t) {
  spec.validate();
  const double w = spec.omega();
  ClassicalPoint pt;
  pt.x = x0 * std::cos(w * t) + p0 / (spec.mass * w) * std::sin(w * t);
  pt.p = p0 * std::cos(w * t) - spec.mass * w * x0 * std::sin(w * t);
  pt.x3p = pt.x * pt.x * pt.x * pt.p;
  return pt;
}

double classical_gap(const OscillatorSpec& spec, const PacketSpec& packet, double t) {
  const double x0 = packet.amplitude * std::cos(packet.phase0);
  const double p0 = -packet.momentum_amplitude(spec) * std::sin(packet.phase0);
  return classical_trajectory(spec, x0, p0, t).x3p - x3p_closed_form(spec, packet, t);
}

double classical_gap_bound(const OscillatorSpec& spec, const PacketSpec& packet) {
  return 1.5 * std::sqrt(spec.mass * spec.stiffness) * packet.amplitude * packet.amplitude *
         spec.packet_variance();
}

double x3p_eigenfunction(double lambda, double x) {
  if (!(lambda > 0.0)) throw Error("x3p_eigenfunction: lambda must be positive");
  if (x <= 0.0) return 0.0;
  return std::sqrt(2.0 * lambda) * std::exp(-0.5 * lambda / (x * x)) / std::pow(x, 1.5);
}

GridFunction sample_eigenfunction(double lambda, int n, double x_max_factor) {
  // exp(-lambda/(2 x^2)) < 1e-15 of peak once lambda/(2 x^2) > ~34.5.
  const double x_min = std::sqrt(lambda / 69.0);
  const double x_max = x_max_factor * std::sqrt(lambda);
  GridFunction g = GridFunction::logarithmic(x_min, x_max, n);
  for (int i = 0; i < n; ++i) g.set_value(i, x3p_eigenfunction(lambda, g.x(i)));
  return g;
}

EigenfunctionMoments eigenfunction_moments(double lambda, double hbar, int n) {
  // The <X> integrand tail decays as 2 lambda/x^2, so the truncation error
  // at x_max = 3e7 sqrt(lambda) is ~4e-8 relative: inside the 1e-6 target.
  const GridFunction s = sample_eigenfunction(lambda, n, 3e7);
  EigenfunctionMoments m;
  m.norm2 = s.norm2();
  GridFunction xs = s;
  for (int i = 0; i < s.size(); ++i) xs.set_value(i, s.x(i) * s.value(i));
  m.mean_x = s.inner(xs).real();
  m.mean_p = Complex(0.0, -hbar) * s.inner(s.derivative(4));
  m.x3p = x3p_quadrature(s, hbar);
  return m;
}

double eigenfunction_residual(double lambda, double hbar, int n) {
  const GridFunction s = sample_eigenfunction(lambda, n, 100.0);
  const GridFunction d = s.derivative(4);
  GridFunction r = s;
  for (int i = 0; i < s.size(); ++i) {
    const double x = s.x(i);
    const Complex os = Complex(0.0, -hbar) * (x * x * x * d.value(i) + 1.5 * x * x * s.value(i));
    r.set_value(i, os - Complex(0.0, -hbar * lambda) * s.value(i));
  }
  return std::sqrt(r.norm2() / s.norm2());
}

Mat x3p_operator_matrix(const GridFunction& geometry, double hbar) {
  const int n = geometry.size();
  // Differentiation matrix in the uniform parameter, then chain rule.
  Mat d = Mat::Zero(n, n);
  const double h = geometry.step();
  for (int i = 2; i + 2 < n; ++i) {
    d(i, i - 2) = 1.0 / (12.0 * h);
    d(i, i - 1) = -8.0 / (12.0 * h);
    d(i, i + 1) = 8.0 / (12.0 * h);
    d(i, i + 2) = -1.0 / (12.0 * h);
  }
  const double e0[5] = {-25, 48, -36, 16, -3};
  const double e1[5] = {-3, -10, 18, -6, 1};
  for (int k = 0; k < 5; ++k) {
    d(0, k) = e0[k] / (12.0 * h);
    d(1, k) = e1[k] / (12.0 * h);
    d(n - 1, n - 1 - k) = -e0[k] / (12.0 * h);
    d(n - 2, n - 1 - k) = -e1[k] / (12.0 * h);
  }
  Vec x3(n);
  for (int i = 0; i < n; ++i) {
    const double xi = geometry.x(i);
    x3(i) = xi * xi * xi;
  }
  if (geometry.kind() == GridKind::logarithmic) {
    Vec xinv(n);
    for (int i = 0; i < n; ++i) xinv(i) = 1.0 / geometry.x(i);
    d = xinv.asDiagonal() * d;  // d/dx = (1/x) d/du
  }
  // -i hbar (X^3 D + D X^3)/2.
  Mat o = x3.asDiagonal() * d;
  o += d * x3.asDiagonal();
  return Complex(0.0, -0.5 * hbar) * o;
}

double energy_eigenstate_variance(int n, const OscillatorSpec& spec) {
  spec.validate();
  if (n < 0) throw Error("energy_eigenstate_variance: negative index");
  return (n + 0.5) * spec.hbar / (spec.mass * spec.omega());
}

double matched_amplitude(int n, const OscillatorSpec& spec) {
  // E_n = (n + 1/2) hbar w = k A^2/2.
  return std::sqrt((2.0 * n + 1.0) * spec.hbar * spec.omega() / spec.stiffness);
}

GridFunction sample_energy_eigenstate(int n, const OscillatorSpec& spec, double x0, double x1,
                                      int npts) {
  spec.validate();
  if (n < 0 || n > 64) throw Error("sample_energy_eigenstate: index out of range");
  const double ell = std::sqrt(spec.hbar / (spec.mass * spec.omega()));
  GridFunction g = GridFunction::uniform(x0, x1, npts);
  double log_norm = -0.25 * std::log(kPi) - 0.5 * std::log(ell);
  for (int k = 1; k <= n; ++k) log_norm -= 0.5 * std::log(2.0 * k);
  for (int i = 0; i < npts; ++i) {
    const double xi = g.x(i) / ell;
    double hm1 = 0.0, hcur = 1.0;  // Hermite recurrence H_{k+1} = 2 xi H_k - 2k H_{k-1}
    for (int k = 0; k < n; ++k) {
      const double hnext = 2.0 * xi * hcur - 2.0 * k * hm1;
      hm1 = hcur;
      hcur = hnext;
    }
    g.set_value(i, hcur * std::exp(log_norm - 0.5 * xi * xi));
  }
  return g;
}

GridFunction grid_evolve(const GridFunction& state0, const OscillatorSpec& spec, double t,
                         int steps, const std::function<void(double, const GridFunction&)>& observer,
                         int observe_every) {
  spec.validate();
  if (state0.kind() != GridKind::uniform) throw Error("grid_evolve: uniform grid required");
  if (t < 0.0) throw Error("grid_evolve: negative time");
  if (steps <= 0) steps = std::max(1, static_cast<int>(std::ceil(t / (spec.period() / 16384))));
  const double dt = t / steps;
  if (dt > spec.period() / 200.0)
    throw Error("grid_evolve: time step exceeds the period/200 bound");

  const int n = state0.size();
  const double h = state0.step();
  const double kinetic = spec.hbar * spec.hbar / (2.0 * spec.mass * h * h);
  // i hbar dpsi/dt = H psi; Cayley form (1 + i a H) psi' = (1 - i a H) psi.
  const Complex ia(0.0, dt / (2.0 * spec.hbar));
  std::vector<Complex> lower(n, ia * (-kinetic));
  std::vector<Complex> upper(n, ia * (-kinetic));
  std::vector<Complex> diag(n);
  std::vector<double> vpot(n);
  for (int i = 0; i < n; ++i) {
    vpot[i] = 2.0 * kinetic + 0.5 * spec.stiffness * state0.x(i) * state0.x(i);
    diag[i] = 1.0 + ia * vpot[i];
  }

  GridFunction state = state0;
  std::vector<Complex> rhs(n);
  if (observer && t > 0.0) observer(0.0, state);
  if (observe_every <= 0) observe_every = steps + 1;
  for (int step = 0; step < steps; ++step) {
    const std::vector<Complex>& psi = state.values();
    for (int i = 0; i < n; ++i) {
      Complex hpsi = vpot[i] * psi[i];
      if (i > 0) hpsi -= kinetic * psi[i - 1];
      if (i + 1 < n) hpsi -= kinetic * psi[i + 1];
      rhs[i] = psi[i] - ia * hpsi;
    }
    solve_tridiagonal(lower, diag, upper, rhs);
    for (int i = 0; i < n; ++i) state.set_value(i, rhs[i]);
    if ((step + 1) % 256 == 0 && std::abs(state.norm2() - 1.0) > 1e-3)
      throw Error("grid_evolve: norm diverged");
    if (observer && ((step + 1) % observe_every == 0 || step + 1 == steps))
      observer(dt * (step + 1), state);
  }
  return state;
}

}  // namespace qmlab
