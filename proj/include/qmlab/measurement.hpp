#pragma once

#include <array>
#include <string>
#include <utility>

#include "qmlab/relative_state.hpp"

namespace qmlab {

// Observer records. The Hilbert space is the direct sum of three subsystem
// copies in the order up, dn, xx (xx = no record yet).
enum class Record { up = 0, dn = 1, xx = 2 };

const std::string& record_label(Record r);

// Mixing operators A1 = cos(theta) P1 + sin(theta) P2 and
// A2 = cos(theta) P2 + sin(theta) P1. They are Hermitian, commute, and
// satisfy A1^2 + A2^2 = 1 on the subsystem.
std::pair<ComplexMatrix, ComplexMatrix> mixing_operators(const Projection& p1,
                                                         const Projection& p2, double theta);

// Measurement of a two-outcome subsystem observable by a three-record
// observer. The observer couples to the subsystem through A1, A2 for the
// finite interval [0, T_m]; outside it only the free Hamiltonian acts.
class MeasurementModel {
 public:
  // p1, p2: orthogonal subsystem projections with p1 + p2 = 1 (outcome "1"
  // and outcome "2"). theta: mixing angle. duration: interaction interval
  // length T_m > 0. h0: free subsystem Hamiltonian, must commute with p1, p2.
  MeasurementModel(Projection p1, Projection p2, double theta, double duration,
                   ComplexMatrix h0);

  // Single spin-1/2: p1 = spin up, p2 = spin down, free levels e_up, e_dn.
  static MeasurementModel single_spin(double theta, double duration, double e_up = 0.0,
                                      double e_dn = 0.0);

  // Two spin-1/2 particles in the basis {uu, ud, du, dd}; the observer
  // measures the first particle (p1 = first spin up). Free Hamiltonian zero.
  static MeasurementModel epr_pair(double theta, double duration);

  int subsystem_dim() const { return p1_.dim(); }
  int dim() const { return 3 * subsystem_dim(); }
  double theta() const { return theta_; }
  double duration() const { return duration_; }
  const Projection& p1() const { return p1_; }
  const Projection& p2() const { return p2_; }
  const ComplexMatrix& h0() const { return h0_; }
  const ComplexMatrix& a1() const { return a1_; }
  const ComplexMatrix& a2() const { return a2_; }

  // Sign s such that the vector (A1 w, A2 w, +i w)/sqrt(2) built over an h0
  // eigenvector w is an eigenvector of the interaction-interval Hamiltonian
  // with eigenvalue E_w + s pi/(2 T_m). Determined numerically at
  // construction; the spectrum is {E_w, E_w +- pi/(2 T_m)} either way.
  int sign_pairing() const { return sign_pairing_; }

 private:
  Projection p1_, p2_;
  double theta_;
  double duration_;
  ComplexMatrix h0_;
  ComplexMatrix a1_, a2_;
  int sign_pairing_;
};

// Density matrix on the 3 n_sub dimensional record space together with the
// block layout. Blocks are indexed by Record.
class BlockState {
 public:
  BlockState(DensityMatrix rho, int subsystem_dim);

  const DensityMatrix& density() const { return rho_; }
  int subsystem_dim() const { return sub_dim_; }
  Mat block(Record row, Record col) const;

 private:
  DensityMatrix rho_;
  int sub_dim_;
};

// diag(m, m, m) on the record space.
Mat replicate_blocks(const Mat& m);

// Interaction phase: 0 for t < 0, pi/2 for t > T_m, pi t/(2 T_m) between.
double interaction_phase(double t, double duration);

// Full Hamiltonian at time t: the off-diagonal coupling (pi/(2 T_m)) in the
// xx row/column during [0, duration], plus diag(h0, h0, h0) at all times.
ComplexMatrix hamiltonian(const MeasurementModel& model, double t);

// Closed-form time translation U(t) = U0(t) M(phi(t)) with U0 = diag copies
// of exp(i h0 t) and M the rotation that feeds the xx block into up/dn.
ComplexMatrix propagator(const MeasurementModel& model, double t);

// Closed-form eigenvectors of the interaction-interval Hamiltonian over an
// h0 eigenvector w (h0 w = energy w): zero = (A2 w, -A1 w, 0) and
// plus/minus = (A1 w, A2 w, +-i w)/sqrt(2). Eigenvalues carry the pairing
// recorded in the model, so ||H e - lambda e|| vanishes for each pair.
struct EigenTriplet {
  Vec zero, plus, minus;
  double lambda_zero, lambda_plus, lambda_minus;
};
EigenTriplet eigen_system(const MeasurementModel& model, const Vec& w, double energy,
                          double tolerance = tol::exact);

// Evolve an initial subsystem state placed in the xx block: returns
// U(t) rho(0) U(t)* as a BlockState.
BlockState evolve(const MeasurementModel& model, const DensityMatrix& rho0_sub, double t);

// Projection onto one record subspace, and the three-branch resolution.
Projection record_projection(const MeasurementModel& model, Record r);
ResolutionOfUnity record_resolution(const MeasurementModel& model);

// Trace(Q_a rho): likelihood that the observer holds record a.
double record_likelihood(const BlockState& state, Record r);

// Conditional likelihood of subsystem outcome `spin` (1 or 2) given the
// record: Trace(P_spin_hat Q_a rho Q_a) / Trace(Q_a rho).
// Throws EmptyBranchError when the record weight is below the floor.
double conditional_spin_likelihood(const MeasurementModel& model, const BlockState& state,
                                   Record r, int spin, double floor = tol::branch_floor);

// Singlet-pair scenario: the observer measures the first particle of a spin
// singlet. Branch conditionals report the second particle's polarization
// given the record; branches with weight below the floor hold NaN
// conditionals. total_spin is the expectation of the pair's total angular
// momentum components (x, y, z), conserved at zero for all t.
struct EprBranch {
  std::string label;
  double likelihood;
  double b_up;
  double b_dn;
};
struct EprTable {
  std::array<EprBranch, 3> branches;
  std::array<double, 3> total_spin;
};
EprTable epr_scenario(const MeasurementModel& model, double t,
                      double floor = tol::branch_floor);

}  // namespace qmlab
