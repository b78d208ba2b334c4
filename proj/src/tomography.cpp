#include "gqcsim/tomography.hpp"

#include <cmath>

namespace gqc {

namespace {
constexpr Complex kI{0.0, 1.0};
}

TomographyError::TomographyError(const std::string& message, double distance)
    : Error(message + " (distance " + std::to_string(distance) + ")"), distance_(distance) {}

Channel channel_from_unitary(const Operator& u) {
  if (!is_unitary(u.matrix())) throw Error("channel_from_unitary: operator not unitary");
  const Mat m = u.matrix();
  return [m](const DensityOperator& rho) {
    if (rho.dim() != m.rows()) throw Error("channel: dimension mismatch");
    return DensityOperator(m * rho.matrix() * m.adjoint());
  };
}

Channel channel_from_program(const CompiledProgram& prog, const SpinSystem& sys,
                             const NoiseConfig& noise) {
  return [prog, sys, noise](const DensityOperator& rho) { return execute(rho, prog, sys, noise); };
}

Channel reduced_channel(Spin observed, const CompiledProgram& prog, const SpinSystem& sys,
                        const NoiseConfig& noise, const StateVector& spectator) {
  const DensityOperator spec_rho = DensityOperator::from_state(spectator);
  return [observed, prog, sys, noise, spec_rho](const DensityOperator& rho_in) {
    if (rho_in.dim() != 2) throw Error("reduced_channel: single-spin input required");
    const Mat joint = observed == Spin::a ? kron(rho_in.matrix(), spec_rho.matrix())
                                          : kron(spec_rho.matrix(), rho_in.matrix());
    const DensityOperator out = execute(DensityOperator(joint), prog, sys, noise);
    return partial_trace(out, observed);
  };
}

namespace {

std::vector<Mat> pauli_basis(int dim) {
  const std::vector<Mat> singles = {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  if (dim == 2) return singles;
  std::vector<Mat> out;
  out.reserve(16);
  for (const auto& p : singles)
    for (const auto& q : singles) out.push_back(kron(p, q));
  return out;
}

}  // namespace

DensityOperator state_tomography(const DensityOperator& rho_true) {
  const int d = rho_true.dim();
  Mat recon = Mat::Zero(d, d);
  for (const auto& p : pauli_basis(d)) {
    const double value = expectation(rho_true, Operator::hermitian(p));
    recon += value * p;
  }
  recon /= static_cast<double>(d);
  recon = 0.5 * (recon + recon.adjoint().eval());

  Eigen::SelfAdjointEigenSolver<Mat> es(recon);
  if (es.eigenvalues().minCoeff() < -kEigSlack) {
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    vals /= vals.sum();
    const Mat projected =
        es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() *
        es.eigenvectors().adjoint();
    const double distance = (projected - recon).norm();
    if (distance > 1e-8)
      throw TomographyError("state_tomography: reconstruction not positive after projection",
                            distance);
    recon = projected;
  }
  return DensityOperator(std::move(recon));
}

namespace {

// Spanning single-qubit inputs |0>, |1>, |+>, |+i> and the coefficients that
// recombine their projectors into the matrix units e_00, e_01, e_10, e_11.
const std::vector<std::pair<std::string, StateVector>>& spanning_inputs() {
  static const auto states = [] {
    const double r = 1 / std::sqrt(2.0);
    std::vector<std::pair<std::string, StateVector>> v;
    v.emplace_back("0", StateVector::basis(2, 0));
    v.emplace_back("1", StateVector::basis(2, 1));
    v.emplace_back("+", StateVector(Vec{{r, r}}));
    v.emplace_back("+i", StateVector(Vec{{Complex(r, 0), Complex(0, r)}}));
    return v;
  }();
  return states;
}

// unit_coeffs[2*k + l][m]: e_{kl} = sum_m coeff * |psi_m><psi_m|
const std::array<std::array<Complex, 4>, 4>& unit_coeffs() {
  static const std::array<std::array<Complex, 4>, 4> c = {{
      {{1, 0, 0, 0}},
      {{Complex(-0.5, -0.5), Complex(-0.5, -0.5), 1, kI}},
      {{Complex(-0.5, 0.5), Complex(-0.5, 0.5), 1, -kI}},
      {{0, 1, 0, 0}},
  }};
  return c;
}

// Assembles the Choi matrix from channel outputs on the spanning product
// inputs; `transform` post-processes each raw output (tomography or identity).
Mat assemble_choi(const Channel& channel, int dim,
                  const std::function<Mat(const DensityOperator&)>& transform,
                  std::vector<std::string>* labels) {
  const auto& inputs = spanning_inputs();
  const auto& coeff = unit_coeffs();
  const int d2 = dim * dim;
  Mat choi = Mat::Zero(d2, d2);

  if (dim == 2) {
    std::array<Mat, 4> outputs;
    for (int m = 0; m < 4; ++m) {
      outputs[m] = transform(channel(DensityOperator::from_state(inputs[m].second)));
      if (labels) labels->push_back(inputs[m].first);
    }
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        Mat block = Mat::Zero(2, 2);
        for (int m = 0; m < 4; ++m) block += coeff[2 * k + l][m] * outputs[m];
        choi.block(2 * k, 2 * l, 2, 2) = block;
      }
    return choi;
  }

  if (dim != 4) throw Error("choi assembly: dimension must be 2 or 4");
  std::array<std::array<Mat, 4>, 4> outputs;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const StateVector joint = tensor(inputs[p].second, inputs[q].second);
      outputs[p][q] = transform(channel(DensityOperator::from_state(joint)));
      if (labels) labels->push_back(inputs[p].first + "," + inputs[q].first);
    }
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const int ka = m >> 1, kb = m & 1;
      const int la = n >> 1, lb = n & 1;
      Mat block = Mat::Zero(4, 4);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          const Complex w = coeff[2 * ka + la][p] * coeff[2 * kb + lb][q];
          if (w != Complex(0, 0)) block += w * outputs[p][q];
        }
      choi.block(4 * m, 4 * n, 4, 4) = block;
    }
  return choi;
}

Mat trace_out_second(const Mat& choi, int dim) {
  Mat out = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) out(i, j) += choi(i * dim + k, j * dim + k);
  return out;
}

}  // namespace

Mat choi_of_channel(const Channel& channel, int dim) {
  return assemble_choi(channel, dim, [](const DensityOperator& rho) { return rho.matrix(); },
                       nullptr);
}

ProcessTomographyResult process_tomography(const Channel& channel, int dim) {
  if (dim != 2 && dim != 4) throw Error("process_tomography: dimension must be 2 or 4");
  ProcessTomographyResult result;
  result.choi = assemble_choi(
      channel, dim,
      [](const DensityOperator& rho) { return state_tomography(rho).matrix(); },
      &result.input_labels);

  if ((result.choi - result.choi.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("process_tomography: Choi matrix not Hermitian");
  result.choi = 0.5 * (result.choi + result.choi.adjoint().eval());
  if (min_eigenvalue(result.choi) < -1e-8)
    throw Error("process_tomography: Choi matrix not positive within -1e-8");
  const Mat marginal = trace_out_second(result.choi, dim) / static_cast<double>(dim);
  const Mat expected = Mat::Identity(dim, dim) / static_cast<double>(dim);
  if ((marginal - expected).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("process_tomography: channel is not trace preserving");
  return result;
}

double process_fidelity(const Mat& choi, const Operator& ideal) {
  const int d = ideal.dim();
  if (choi.rows() != d * d) throw Error("process_fidelity: dimension mismatch");
  Vec v(d * d);
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k) v(m * d + k) = ideal.matrix()(k, m);
  const Complex f = v.dot(choi * v);
  return f.real() / static_cast<double>(d * d);
}

double haar_average_fidelity_unitary(const Operator& ideal, const Operator& actual) {
  if (ideal.dim() != actual.dim()) throw Error("haar_average_fidelity: dimension mismatch");
  const double d = static_cast<double>(ideal.dim());
  const double overlap = std::norm((ideal.matrix().adjoint() * actual.matrix()).trace());
  return (d + overlap) / (d * (d + 1.0));
}

double haar_average_fidelity_mc(const Operator& ideal, const Channel& actual, int samples,
                                std::uint64_t seed) {
  if (samples <= 0) throw Error("haar_average_fidelity_mc: sample count must be positive");
  std::mt19937_64 rng(seed);
  const int d = ideal.dim();
  double sum = 0;
  for (int k = 0; k < samples; ++k) {
    const StateVector psi = haar_random_state(d, rng);
    const StateVector target(ideal.matrix() * psi.amplitudes());
    sum += fidelity_state(target, actual(DensityOperator::from_state(psi)));
  }
  return sum / samples;
}

const std::vector<std::pair<std::string, StateVector>>& six_axial_states() {
  static const auto states = [] {
    const double r = 1 / std::sqrt(2.0);
    std::vector<std::pair<std::string, StateVector>> v;
    v.emplace_back("0", StateVector::basis(2, 0));
    v.emplace_back("1", StateVector::basis(2, 1));
    v.emplace_back("+", StateVector(Vec{{r, r}}));
    v.emplace_back("-", StateVector(Vec{{r, -r}}));
    v.emplace_back("+i", StateVector(Vec{{Complex(r, 0), Complex(0, r)}}));
    v.emplace_back("-i", StateVector(Vec{{Complex(r, 0), Complex(0, -r)}}));
    return v;
  }();
  return states;
}

FidelityReport average_gate_fidelity(const Operator& ideal, const Channel& actual) {
  const int d = ideal.dim();
  if (d != 2 && d != 4) throw Error("average_gate_fidelity: dimension must be 2 or 4");

  FidelityReport report;
  const Mat choi_direct = choi_of_channel(actual, d);
  const double f_pro = process_fidelity(choi_direct, ideal);
  report.haar = (d * f_pro + 1.0) / (d + 1.0);

  const Mat choi_tomo = process_tomography(actual, d).choi;
  report.process = (d * process_fidelity(choi_tomo, ideal) + 1.0) / (d + 1.0);

  if (d == 2) {
    double sum = 0;
    for (const auto& [label, psi] : six_axial_states()) {
      const StateVector target(ideal.matrix() * psi.amplitudes());
      const double f = fidelity_state(target, actual(DensityOperator::from_state(psi)));
      report.per_state.emplace_back(label, f);
      sum += f;
    }
    report.six_state = sum / 6.0;
  } else {
    report.six_state = report.haar;
  }
  return report;
}

}  // namespace gqc
