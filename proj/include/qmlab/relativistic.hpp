#pragma once

#include <vector>

#include "qmlab/numerics.hpp"

namespace qmlab {

// One-particle momentum wavefunction on a uniform p-grid, with the on-shell
// energy omega(p) = sqrt(m^2 + p^2) of its mass. The physical inner product
// carries the invariant measure dp/(2 omega).
class MomentumWavefunction {
 public:
  MomentumWavefunction(double mass, double p_min, double p_max, int n);

  static MomentumWavefunction gaussian(double mass, double center, double width, double p_max,
                                       int n);
  // Hermite-polynomial-modulated Gaussian: H_k((p-center)/width) * Gaussian.
  // Odd k flips parity, which makes controllable even/odd test pairs.
  static MomentumWavefunction hermite_gaussian(int k, double mass, double center, double width,
                                               double p_max, int n);

  double mass() const { return mass_; }
  int size() const { return static_cast<int>(p_.size()); }
  double p(int i) const { return p_[i]; }
  double step() const { return step_; }
  double omega(int i) const;
  Complex value(int i) const { return v_[i]; }
  void set_value(int i, Complex v) { v_[i] = v; }

  // Same samples reinterpreted at a different mass.
  MomentumWavefunction with_mass(double mass) const;

  bool same_grid(const MomentumWavefunction& other) const;

 private:
  double mass_;
  std::vector<double> p_;
  std::vector<Complex> v_;
  double step_;
};

// int dp conj(f) g / (2 omega): the invariant inner product after the energy
// delta is resolved onto the mass shell.
Complex invariant_inner(const MomentumWavefunction& f, const MomentumWavefunction& g);

// <f| x g> = i hbar int dp conj(f) g' / (2 omega), with g' by sixth-order
// differences.
Complex position_element(const MomentumWavefunction& f, const MomentumWavefunction& g,
                         double hbar = 1.0);

// <f| x g> - <x f| g>. Nonzero in general: the derivative acts against the
// non-constant measure. Vanishes when conj(f) g is even.
Complex adjoint_asymmetry(const MomentumWavefunction& f, const MomentumWavefunction& g,
                          double hbar = 1.0);

// Independent closed-route value of the same quantity, from integrating by
// parts: i hbar int dp conj(f) g p/(2 omega^3). No differentiation involved.
Complex asymmetry_oracle(const MomentumWavefunction& f, const MomentumWavefunction& g,
                         double hbar = 1.0);

// Mass sweep at fixed profiles: per-mass inner product, position element,
// asymmetry and |asymmetry/inner|, plus the log-log slope of the ratio
// (expected to approach -2: the nonrelativistic limit restores symmetry).
struct LimitRow {
  double mass;
  Complex inner;
  Complex position;
  Complex asymmetry;
  double ratio;
};
struct LimitStudy {
  std::vector<LimitRow> rows;
  double slope;
};
LimitStudy limit_study(const MomentumWavefunction& f, const MomentumWavefunction& g,
                       const std::vector<double>& masses, double hbar = 1.0);

}  // namespace qmlab
