#include "qmlab/measurement.hpp"

#include <cmath>
#include <limits>

namespace qmlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace

const std::string& record_label(Record r) {
  static const std::string labels[3] = {"up", "dn", "xx"};
  return labels[static_cast<int>(r)];
}

std::pair<ComplexMatrix, ComplexMatrix> mixing_operators(const Projection& p1,
                                                         const Projection& p2, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {ComplexMatrix(c * p1.mat() + s * p2.mat()),
          ComplexMatrix(c * p2.mat() + s * p1.mat())};
}

MeasurementModel::MeasurementModel(Projection p1, Projection p2, double theta, double duration,
                                   ComplexMatrix h0)
    : p1_(std::move(p1)),
      p2_(std::move(p2)),
      theta_(theta),
      duration_(duration),
      h0_(std::move(h0)) {
  if (duration_ <= 0.0) throw Error("MeasurementModel: duration must be positive");
  const int n = p1_.dim();
  if (p2_.dim() != n || h0_.dim() != n) throw Error("MeasurementModel: dimension mismatch");
  if (max_abs(p1_.mat() * p2_.mat()) > tol::exact)
    throw Error("MeasurementModel: p1 and p2 are not orthogonal");
  if (max_abs_diff(p1_.mat() + p2_.mat(), Mat::Identity(n, n)) > tol::exact)
    throw Error("MeasurementModel: p1 + p2 is not the identity");
  if (!h0_.is_hermitian()) throw Error("MeasurementModel: h0 is not Hermitian");
  for (const auto* p : {&p1_, &p2_})
    if (max_abs(h0_.mat() * p->mat() - p->mat() * h0_.mat()) > tol::exact)
      throw Error("MeasurementModel: h0 does not commute with the outcome projections");

  auto [a1, a2] = mixing_operators(p1_, p2_, theta_);
  a1_ = std::move(a1);
  a2_ = std::move(a2);

  // Determine which of +-pi/(2 T_m) the "+" eigenvector actually pairs with.
  sign_pairing_ = +1;  // provisional; settled below
  const EigResult h0_eig = eig_hermitian(h0_);
  const Vec w = h0_eig.eigenvectors.col(0);
  const double e_w = h0_eig.eigenvalues.front();
  Vec plus(3 * n);
  plus << a1_.mat() * w, a2_.mat() * w, Complex(0.0, 1.0) * w;
  plus /= std::sqrt(2.0);
  const Mat h = hamiltonian(*this, duration_ / 2).mat();
  const double offset = kPi / (2.0 * duration_);
  const double res_plus = (h * plus - (e_w + offset) * plus).norm();
  const double res_minus = (h * plus - (e_w - offset) * plus).norm();
  sign_pairing_ = res_plus <= res_minus ? +1 : -1;
}

MeasurementModel MeasurementModel::single_spin(double theta, double duration, double e_up,
                                               double e_dn) {
  Mat p1 = Mat::Zero(2, 2);
  p1(0, 0) = 1.0;
  Mat p2 = Mat::Zero(2, 2);
  p2(1, 1) = 1.0;
  Mat h0 = Mat::Zero(2, 2);
  h0(0, 0) = e_up;
  h0(1, 1) = e_dn;
  return MeasurementModel(Projection(ComplexMatrix(p1)), Projection(ComplexMatrix(p2)), theta,
                          duration, ComplexMatrix(h0));
}

MeasurementModel MeasurementModel::epr_pair(double theta, double duration) {
  Mat up = Mat::Zero(2, 2), dn = Mat::Zero(2, 2), id = Mat::Identity(2, 2);
  up(0, 0) = 1.0;
  dn(1, 1) = 1.0;
  return MeasurementModel(Projection(ComplexMatrix(kron(up, id))),
                          Projection(ComplexMatrix(kron(dn, id))), theta, duration,
                          ComplexMatrix(Mat::Zero(4, 4)));
}

BlockState::BlockState(DensityMatrix rho, int subsystem_dim)
    : rho_(std::move(rho)), sub_dim_(subsystem_dim) {
  if (rho_.dim() != 3 * sub_dim_)
    throw Error("BlockState: density dimension does not match 3 subsystem blocks");
}

Mat BlockState::block(Record row, Record col) const {
  return rho_.mat().block(static_cast<int>(row) * sub_dim_, static_cast<int>(col) * sub_dim_,
                          sub_dim_, sub_dim_);
}

Mat replicate_blocks(const Mat& m) {
  const Eigen::Index n = m.rows();
  Mat out = Mat::Zero(3 * n, 3 * n);
  for (int b = 0; b < 3; ++b) out.block(b * n, b * n, n, n) = m;
  return out;
}

double interaction_phase(double t, double duration) {
  if (duration <= 0.0) throw Error("interaction_phase: duration must be positive");
  if (t < 0.0) return 0.0;
  if (t > duration) return kPi / 2.0;
  return kPi * t / (2.0 * duration);
}

ComplexMatrix hamiltonian(const MeasurementModel& model, double t) {
  const int n = model.subsystem_dim();
  Mat h = replicate_blocks(model.h0().mat());
  if (t >= 0.0 && t <= model.duration()) {
    const Complex ic(0.0, kPi / (2.0 * model.duration()));
    h.block(0, 2 * n, n, n) = ic * model.a1().mat();
    h.block(n, 2 * n, n, n) = ic * model.a2().mat();
    h.block(2 * n, 0, n, n) = -ic * model.a1().mat();
    h.block(2 * n, n, n, n) = -ic * model.a2().mat();
  }
  return ComplexMatrix(std::move(h));
}

ComplexMatrix propagator(const MeasurementModel& model, double t) {
  const int n = model.subsystem_dim();
  const double phi = interaction_phase(t, model.duration());
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const Mat& a1 = model.a1().mat();
  const Mat& a2 = model.a2().mat();
  const Mat id = Mat::Identity(n, n);

  Mat m(3 * n, 3 * n);
  m.block(0, 0, n, n) = a2 * a2 + c * a1 * a1;
  m.block(0, n, n, n) = (c - 1.0) * a1 * a2;
  m.block(0, 2 * n, n, n) = s * a1;
  m.block(n, 0, n, n) = (c - 1.0) * a1 * a2;
  m.block(n, n, n, n) = a1 * a1 + c * a2 * a2;
  m.block(n, 2 * n, n, n) = s * a2;
  m.block(2 * n, 0, n, n) = -s * a1;
  m.block(2 * n, n, n, n) = -s * a2;
  m.block(2 * n, 2 * n, n, n) = c * id;

  const Mat u0 = expm_i(model.h0(), t).mat();
  return ComplexMatrix(replicate_blocks(u0) * m);
}

EigenTriplet eigen_system(const MeasurementModel& model, const Vec& w, double energy,
                          double tolerance) {
  const int n = model.subsystem_dim();
  if (w.size() != n) throw Error("eigen_system: vector size does not match subsystem");
  if (std::abs(w.norm() - 1.0) > tolerance) throw Error("eigen_system: w is not normalized");
  if ((model.h0().mat() * w - energy * w).norm() > std::max(tolerance, 1e-9))
    throw Error("eigen_system: w is not an h0 eigenvector at the stated energy");

  const Mat& a1 = model.a1().mat();
  const Mat& a2 = model.a2().mat();
  EigenTriplet out;
  out.zero = Vec(3 * n);
  out.zero << a2 * w, -(a1 * w), Vec::Zero(n);
  out.zero /= out.zero.norm();
  out.plus = Vec(3 * n);
  out.plus << a1 * w, a2 * w, Complex(0.0, 1.0) * w;
  out.plus /= std::sqrt(2.0);
  out.minus = Vec(3 * n);
  out.minus << a1 * w, a2 * w, Complex(0.0, -1.0) * w;
  out.minus /= std::sqrt(2.0);

  const double offset = kPi / (2.0 * model.duration()) * model.sign_pairing();
  out.lambda_zero = energy;
  out.lambda_plus = energy + offset;
  out.lambda_minus = energy - offset;
  return out;
}

BlockState evolve(const MeasurementModel& model, const DensityMatrix& rho0_sub, double t) {
  const int n = model.subsystem_dim();
  if (rho0_sub.dim() != n) throw Error("evolve: initial state dimension mismatch");
  Mat rho0 = Mat::Zero(3 * n, 3 * n);
  rho0.block(2 * n, 2 * n, n, n) = rho0_sub.mat();
  const Mat u = propagator(model, t).mat();
  Mat rho = u * rho0 * u.adjoint();
  rho = 0.5 * (rho + Mat(rho.adjoint()));
  return BlockState(DensityMatrix(ComplexMatrix(std::move(rho))), n);
}

Projection record_projection(const MeasurementModel& model, Record r) {
  const int n = model.subsystem_dim();
  Mat q = Mat::Zero(3 * n, 3 * n);
  const int b = static_cast<int>(r);
  q.block(b * n, b * n, n, n) = Mat::Identity(n, n);
  return Projection(ComplexMatrix(std::move(q)));
}

ResolutionOfUnity record_resolution(const MeasurementModel& model) {
  std::vector<Projection> qs;
  std::vector<std::string> labels;
  for (Record r : {Record::up, Record::dn, Record::xx}) {
    qs.push_back(record_projection(model, r));
    labels.push_back(record_label(r));
  }
  return ResolutionOfUnity(std::move(qs), std::move(labels));
}

double record_likelihood(const BlockState& state, Record r) {
  return state.block(r, r).trace().real();
}

double conditional_spin_likelihood(const MeasurementModel& model, const BlockState& state,
                                   Record r, int spin, double floor) {
  if (spin != 1 && spin != 2) throw Error("conditional_spin_likelihood: spin must be 1 or 2");
  const double weight = record_likelihood(state, r);
  if (weight < floor)
    throw EmptyBranchError("conditional_spin_likelihood: record '" + record_label(r) +
                           "' has weight " + std::to_string(weight) + " below floor");
  const Mat& p = (spin == 1 ? model.p1() : model.p2()).mat();
  // Trace(P_hat Q_a rho Q_a) reduces to the trace over the record's diagonal block.
  return (p * state.block(r, r)).trace().real() / weight;
}

EprTable epr_scenario(const MeasurementModel& model, double t, double floor) {
  const int n = model.subsystem_dim();
  if (n != 4) throw Error("epr_scenario: model subsystem is not a two spin-1/2 pair");
  Mat first_up = Mat::Zero(4, 4);
  first_up(0, 0) = first_up(1, 1) = 1.0;
  if (max_abs_diff(model.p1().mat(), first_up) > tol::exact)
    throw Error("epr_scenario: model does not measure the first particle's polarization");

  // Singlet (ud - du)/sqrt(2) in the {uu, ud, du, dd} basis.
  Vec singlet = Vec::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  const BlockState state = evolve(model, DensityMatrix::pure(singlet), t);

  Mat b_up = Mat::Zero(4, 4), b_dn = Mat::Zero(4, 4);
  b_up(0, 0) = b_up(2, 2) = 1.0;
  b_dn(1, 1) = b_dn(3, 3) = 1.0;

  EprTable out;
  for (Record r : {Record::up, Record::dn, Record::xx}) {
    const int i = static_cast<int>(r);
    const double weight = record_likelihood(state, r);
    double pf_up = std::numeric_limits<double>::quiet_NaN();
    double pf_dn = std::numeric_limits<double>::quiet_NaN();
    if (weight >= floor) {
      const Mat blk = state.block(r, r);
      pf_up = (b_up * blk).trace().real() / weight;
      pf_dn = (b_dn * blk).trace().real() / weight;
    }
    out.branches[i] = EprBranch{record_label(r), weight, pf_up, pf_dn};
  }

  // Pair spin components (units of hbar = 1): (sigma x 1 + 1 x sigma)/2.
  const Complex i1(0.0, 1.0);
  Mat sx(2, 2), sy(2, 2), sz(2, 2), id = Mat::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i1, i1, 0;
  sz << 1, 0, 0, -1;
  const Mat sigmas[3] = {sx, sy, sz};
  for (int c = 0; c < 3; ++c) {
    const Mat total = 0.5 * (kron(sigmas[c], id) + kron(id, sigmas[c]));
    out.total_spin[c] = (replicate_blocks(total) * state.density().mat()).trace().real();
  }
  return out;
}

}  // namespace qmlab
