#pragma once

// Dense complex linear algebra and quantum-state primitives for one or two
// spin-1/2 systems (Hilbert space dimensions 2 and 4).
//
// Basis order for two spins is |a,b> with spin a as the most significant
// factor: |00>, |01>, |10>, |11>.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace gqc {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigSlack = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

enum class Spin { a, b };

inline const char* spin_name(Spin s) { return s == Spin::a ? "a" : "b"; }

// Pauli matrices and spin-1/2 angular momentum operators I = sigma/2.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat spin_x();
Mat spin_y();
Mat spin_z();

// Embeds a single-spin operator into the two-spin space on the given factor.
Mat on_spin(Spin target, const Mat& op2);

/// A pure state of one or two spins. Dimension must be 2 or 4 and the
/// squared norm must be 1 within 1e-12.
class StateVector {
 public:
  explicit StateVector(Vec amplitudes);
  static StateVector normalized(Vec amplitudes);
  static StateVector basis(int dim, int index);

  const Vec& amplitudes() const { return amps_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  Complex overlap(const StateVector& other) const;

 private:
  Vec amps_;
};

/// A density operator of one or two spins: Hermitian within 1e-12,
/// unit trace within 1e-12, eigenvalues >= -1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(Mat matrix);
  static DensityOperator from_state(const StateVector& psi);
  static DensityOperator maximally_mixed(int dim);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double purity() const;

 private:
  Mat m_;
};

/// A linear operator; when flagged unitary, U^dag U = I is enforced
/// within 1e-10.
class Operator {
 public:
  Operator(Mat matrix, bool unitary_flag);
  static Operator unitary(Mat matrix) { return Operator(std::move(matrix), true); }
  static Operator hermitian(Mat matrix);
  static Operator identity(int dim);

  const Mat& matrix() const { return m_; }
  bool is_unitary_flagged() const { return unitary_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
  bool unitary_;
};

// Kronecker products in the fixed |a,b> order (left factor = spin a).
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);
Mat kron(const Mat& a, const Mat& b);

// Tr(rho * obs) for a Hermitian observable; the residual imaginary part is
// checked against 1e-10 and discarded.
double expectation(const StateVector& psi, const Operator& obs);
double expectation(const DensityOperator& rho, const Operator& obs);

// Reduced state of the kept spin of a two-spin density operator.
DensityOperator partial_trace(const DensityOperator& rho, Spin keep);
Mat partial_trace(const Mat& rho4, Spin keep);

// <psi|rho|psi>, the overlap fidelity of a pure target with an actual state.
double fidelity_state(const StateVector& ideal, const DensityOperator& actual);

// exp(-i * h * t) for Hermitian h, via eigendecomposition.
Mat propagator(const Mat& h, double t);

bool is_hermitian(const Mat& m, double tol = kHermitianTol);
bool is_unitary(const Mat& m, double tol = kUnitaryTol);
double min_eigenvalue(const Mat& hermitian);

// Distance between matrices modulo a global phase on `b`.
double distance_up_to_phase(const Mat& a, const Mat& b);

// Wraps an angle to the principal interval (-pi, pi].
double wrap_angle(double x);

// Haar-distributed random unitary (Ginibre + QR with phase fixing) and a
// uniformly random pure state.
Mat haar_random_unitary(int dim, std::mt19937_64& rng);
StateVector haar_random_state(int dim, std::mt19937_64& rng);

// Bloch vector (<sigma_x>, <sigma_y>, <sigma_z>) of a single-spin pure state.
Eigen::Vector3d bloch_vector(const StateVector& psi);

}  // namespace gqc
