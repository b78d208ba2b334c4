#include "gqcsim/gates.hpp"

#include <cmath>
#include <numbers>

namespace gqc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
}  // namespace

GateSpec::GateSpec(double gamma_, double chi_, double phi_)
    : gamma(gamma_), chi(chi_), phi(phi_) {
  if (chi < 0 || chi > kPi) throw Error("GateSpec: chi outside [0, pi]");
  if (phi < 0 || phi >= 2 * kPi) throw Error("GateSpec: phi outside [0, 2*pi)");
}

Operator make_gate(const GateSpec& spec) {
  const Complex eg = std::exp(kI * spec.gamma);
  const Complex emg = std::exp(-kI * spec.gamma);
  const double c2 = std::cos(spec.chi / 2) * std::cos(spec.chi / 2);
  const double s2 = std::sin(spec.chi / 2) * std::sin(spec.chi / 2);
  const Complex off = kI * std::sin(spec.gamma) * std::sin(spec.chi);
  Mat u(2, 2);
  u << eg * c2 + emg * s2, off * std::exp(-kI * spec.phi),
       off * std::exp(kI * spec.phi), eg * s2 + emg * c2;
  return Operator::unitary(std::move(u));
}

std::pair<StateVector, StateVector> cyclic_states(double chi, double phi) {
  const Complex em = std::exp(-kI * (phi / 2));
  const Complex ep = std::exp(kI * (phi / 2));
  const double c = std::cos(chi / 2), s = std::sin(chi / 2);
  Vec plus(2), minus(2);
  plus << em * c, ep * s;
  minus << -em * s, ep * c;
  return {StateVector(std::move(plus)), StateVector(std::move(minus))};
}

Operator make_controlled_gate() {
  Mat u = Mat::Zero(4, 4);
  u(0, 0) = -kI;
  u(1, 1) = kI;
  u(2, 2) = 1;
  u(3, 3) = 1;
  return Operator::unitary(std::move(u));
}

std::pair<double, double> gate_eigenphase_check(const Operator& u, double chi, double phi) {
  if (u.dim() != 2) throw Error("gate_eigenphase_check: single-qubit unitary required");
  if (!is_unitary(u.matrix())) throw Error("gate_eigenphase_check: operator not unitary");
  const auto [plus, minus] = cyclic_states(chi, phi);
  auto eigenphase = [&](const StateVector& psi) {
    const Vec out = u.matrix() * psi.amplitudes();
    const Complex lambda = psi.amplitudes().dot(out);
    const double deviation = (out - lambda * psi.amplitudes()).norm();
    if (deviation > 1e-8)
      throw Error("gate_eigenphase_check: cyclic state is not an eigenvector (deviation " +
                  std::to_string(deviation) + ")");
    return std::arg(lambda);
  };
  return {eigenphase(plus), eigenphase(minus)};
}

}  // namespace gqc
