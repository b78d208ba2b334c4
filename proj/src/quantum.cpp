#include "gqcsim/quantum.hpp"

#include <cmath>
#include <numbers>

namespace gqc {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat spin_x() { return 0.5 * pauli_x(); }
Mat spin_y() { return 0.5 * pauli_y(); }
Mat spin_z() { return 0.5 * pauli_z(); }

Mat on_spin(Spin target, const Mat& op2) {
  if (op2.rows() != 2 || op2.cols() != 2) throw Error("on_spin: operator must be 2x2");
  Mat id = Mat::Identity(2, 2);
  return target == Spin::a ? kron(op2, id) : kron(id, op2);
}

StateVector::StateVector(Vec amplitudes) : amps_(std::move(amplitudes)) {
  const auto n = amps_.size();
  if (n != 2 && n != 4) throw Error("StateVector: dimension must be 2 or 4");
  if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol)
    throw Error("StateVector: squared norm deviates from 1 beyond 1e-12");
}

StateVector StateVector::normalized(Vec amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw Error("StateVector: cannot normalize the zero vector");
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw Error("StateVector: basis index out of range");
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

Complex StateVector::overlap(const StateVector& other) const {
  if (dim() != other.dim()) throw Error("overlap: dimension mismatch");
  return amps_.dot(other.amps_);  // Eigen dot conjugates the left argument
}

DensityOperator::DensityOperator(Mat matrix) : m_(std::move(matrix)) {
  const auto n = m_.rows();
  if ((n != 2 && n != 4) || m_.cols() != n)
    throw Error("DensityOperator: matrix must be square of dimension 2 or 4");
  if (!is_hermitian(m_, kHermitianTol))
    throw Error("DensityOperator: matrix not Hermitian within 1e-12");
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol || std::abs(m_.trace().imag()) > kTraceTol)
    throw Error("DensityOperator: trace deviates from 1 beyond 1e-12");
  if (min_eigenvalue(m_) < -kEigSlack)
    throw Error("DensityOperator: negative eigenvalue beyond -1e-10");
}

DensityOperator DensityOperator::from_state(const StateVector& psi) {
  const Vec& v = psi.amplitudes();
  return DensityOperator(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Operator::Operator(Mat matrix, bool unitary_flag)
    : m_(std::move(matrix)), unitary_(unitary_flag) {
  if (m_.rows() != m_.cols()) throw Error("Operator: matrix must be square");
  if (unitary_ && !is_unitary(m_, kUnitaryTol))
    throw Error("Operator: unitarity violated beyond 1e-10");
}

Operator Operator::hermitian(Mat matrix) {
  if (!is_hermitian(matrix)) throw Error("Operator: matrix not Hermitian");
  return Operator(std::move(matrix), false);
}

Operator Operator::identity(int dim) { return Operator(Mat::Identity(dim, dim), true); }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.dim() != 2 || b.dim() != 2) throw Error("tensor: factors must be single spins");
  Vec out(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(2 * i + j) = a.amplitudes()(i) * b.amplitudes()(j);
  return StateVector(std::move(out));
}

Operator tensor(const Operator& a, const Operator& b) {
  if (a.dim() != 2 || b.dim() != 2) throw Error("tensor: factors must be single spins");
  return Operator(kron(a.matrix(), b.matrix()),
                  a.is_unitary_flagged() && b.is_unitary_flagged());
}

namespace {

double checked_real(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-10) throw Error(std::string(what) + ": residual imaginary part beyond 1e-10");
  return value.real();
}

}  // namespace

double expectation(const StateVector& psi, const Operator& obs) {
  if (psi.dim() != obs.dim()) throw Error("expectation: dimension mismatch");
  if (!is_hermitian(obs.matrix())) throw Error("expectation: observable not Hermitian");
  const Complex v = psi.amplitudes().dot(obs.matrix() * psi.amplitudes());
  return checked_real(v, "expectation");
}

double expectation(const DensityOperator& rho, const Operator& obs) {
  if (rho.dim() != obs.dim()) throw Error("expectation: dimension mismatch");
  if (!is_hermitian(obs.matrix())) throw Error("expectation: observable not Hermitian");
  const Complex v = (rho.matrix() * obs.matrix()).trace();
  return checked_real(v, "expectation");
}

Mat partial_trace(const Mat& rho4, Spin keep) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw Error("partial_trace: input must be 4x4");
  Mat out = Mat::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (keep == Spin::a)
          out(i, j) += rho4(2 * i + k, 2 * j + k);
        else
          out(i, j) += rho4(2 * k + i, 2 * k + j);
      }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Spin keep) {
  if (rho.dim() != 4) throw Error("partial_trace: state must be two spins");
  return DensityOperator(partial_trace(rho.matrix(), keep));
}

double fidelity_state(const StateVector& ideal, const DensityOperator& actual) {
  if (ideal.dim() != actual.dim()) throw Error("fidelity_state: dimension mismatch");
  const Complex v = ideal.amplitudes().dot(actual.matrix() * ideal.amplitudes());
  return checked_real(v, "fidelity_state");
}

Mat propagator(const Mat& h, double t) {
  if (!is_hermitian(h, 1e-9)) throw Error("propagator: generator not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& vals = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  Vec phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    phases(k) = std::exp(Complex(0.0, -vals(k) * t));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& m, double tol) {
  const Mat d = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double distance_up_to_phase(const Mat& a, const Mat& b) {
  const Complex tr = (b.adjoint() * a).trace();
  const Complex phase = std::abs(tr) > 0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double y = std::fmod(x, two_pi);
  if (y <= -std::numbers::pi) y += two_pi;
  if (y > std::numbers::pi) y -= two_pi;
  return y;
}

Mat haar_random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar, not just QR-dependent.
  for (int k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    q.col(k) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0));
  }
  return q;
}

StateVector haar_random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return StateVector::normalized(std::move(v));
}

Eigen::Vector3d bloch_vector(const StateVector& psi) {
  if (psi.dim() != 2) throw Error("bloch_vector: single-spin state required");
  const Vec& v = psi.amplitudes();
  const Complex c = std::conj(v(0)) * v(1);
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(v(0)) - std::norm(v(1))};
}

}  // namespace gqc
