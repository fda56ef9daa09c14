#include "qmlab/relativistic.hpp"

#include <cmath>

namespace qmlab {

MomentumWavefunction::MomentumWavefunction(double mass, double p_min, double p_max, int n)
    : mass_(mass) {
  if (!(mass > 0.0)) throw Error("MomentumWavefunction: mass must be positive");
  if (n < 16 || !(p_max > p_min)) throw Error("MomentumWavefunction: bad grid");
  p_.resize(n);
  v_.assign(n, Complex(0.0, 0.0));
  step_ = (p_max - p_min) / (n - 1);
  for (int i = 0; i < n; ++i) p_[i] = p_min + step_ * i;
}

MomentumWavefunction MomentumWavefunction::gaussian(double mass, double center, double width,
                                                    double p_max, int n) {
  return hermite_gaussian(0, mass, center, width, p_max, n);
}

MomentumWavefunction MomentumWavefunction::hermite_gaussian(int k, double mass, double center,
                                                            double width, double p_max, int n) {
  if (k < 0 || k > 16) throw Error("hermite_gaussian: order out of range");
  if (!(width > 0.0)) throw Error("hermite_gaussian: width must be positive");
  MomentumWavefunction f(mass, -p_max, p_max, n);
  for (int i = 0; i < n; ++i) {
    const double xi = (f.p(i) - center) / width;
    double hm1 = 0.0, hcur = 1.0;
    for (int j = 0; j < k; ++j) {
      const double hnext = 2.0 * xi * hcur - 2.0 * j * hm1;
      hm1 = hcur;
      hcur = hnext;
    }
    f.set_value(i, hcur * std::exp(-0.5 * xi * xi));
  }
  return f;
}

double MomentumWavefunction::omega(int i) const {
  return std::sqrt(mass_ * mass_ + p_[i] * p_[i]);
}

MomentumWavefunction MomentumWavefunction::with_mass(double mass) const {
  MomentumWavefunction out = *this;
  if (!(mass > 0.0)) throw Error("with_mass: mass must be positive");
  out.mass_ = mass;
  return out;
}

bool MomentumWavefunction::same_grid(const MomentumWavefunction& other) const {
  return p_.size() == other.p_.size() && step_ == other.step_ && p_.front() == other.p_.front();
}

namespace {

void require_compatible(const MomentumWavefunction& f, const MomentumWavefunction& g) {
  if (!f.same_grid(g)) throw Error("momentum grids differ");
  if (f.mass() != g.mass()) throw Error("masses differ");
}

}  // namespace

Complex invariant_inner(const MomentumWavefunction& f, const MomentumWavefunction& g) {
  require_compatible(f, g);
  std::vector<Complex> w(f.size());
  for (int i = 0; i < f.size(); ++i)
    w[i] = std::conj(f.value(i)) * g.value(i) / (2.0 * f.omega(i));
  return trapezoid(w, f.step());
}

Complex position_element(const MomentumWavefunction& f, const MomentumWavefunction& g,
                         double hbar) {
  require_compatible(f, g);
  std::vector<Complex> gv(g.size());
  for (int i = 0; i < g.size(); ++i) gv[i] = g.value(i);
  const std::vector<Complex> dg = derivative_uniform(gv, g.step(), 6);
  std::vector<Complex> w(f.size());
  for (int i = 0; i < f.size(); ++i)
    w[i] = std::conj(f.value(i)) * dg[i] / (2.0 * f.omega(i));
  return Complex(0.0, hbar) * trapezoid(w, f.step());
}

Complex adjoint_asymmetry(const MomentumWavefunction& f, const MomentumWavefunction& g,
                          double hbar) {
  // <x f| g> = conj(<g| x f>).
  return position_element(f, g, hbar) - std::conj(position_element(g, f, hbar));
}

Complex asymmetry_oracle(const MomentumWavefunction& f, const MomentumWavefunction& g,
                         double hbar) {
  require_compatible(f, g);
  std::vector<Complex> w(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const double om = f.omega(i);
    w[i] = std::conj(f.value(i)) * g.value(i) * f.p(i) / (2.0 * om * om * om);
  }
  return Complex(0.0, hbar) * trapezoid(w, f.step());
}

LimitStudy limit_study(const MomentumWavefunction& f, const MomentumWavefunction& g,
                       const std::vector<double>& masses, double hbar) {
  if (masses.size() < 2) throw Error("limit_study: need at least two masses");
  for (size_t i = 1; i < masses.size(); ++i)
    if (!(masses[i] > masses[i - 1])) throw Error("limit_study: masses must ascend");

  LimitStudy out;
  std::vector<double> log_m, log_ratio;
  for (double m : masses) {
    const MomentumWavefunction fm = f.with_mass(m);
    const MomentumWavefunction gm = g.with_mass(m);
    LimitRow row;
    row.mass = m;
    row.inner = invariant_inner(fm, gm);
    row.position = position_element(fm, gm, hbar);
    row.asymmetry = adjoint_asymmetry(fm, gm, hbar);
    row.ratio = std::abs(row.asymmetry) / std::abs(row.inner);
    out.rows.push_back(row);
    log_m.push_back(std::log(m));
    log_ratio.push_back(std::log(row.ratio));
  }
  out.slope = linear_fit(log_m, log_ratio).slope;
  return out;
}

}  // namespace qmlab
