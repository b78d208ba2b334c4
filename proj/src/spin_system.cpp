#include "gqcsim/spin_system.hpp"

#include <cmath>
#include <numbers>

namespace gqc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
}  // namespace

SpinSystem::SpinSystem(double omega_a_, double omega_b_, double j_coupling_, double t2_a_,
                       double t2_b_)
    : omega_a(omega_a_), omega_b(omega_b_), j_coupling(j_coupling_), t2_a(t2_a_), t2_b(t2_b_) {
  if (!(j_coupling > 0)) throw Error("SpinSystem: j_coupling must be positive");
  if (!(t2_a > 0) || !(t2_b > 0)) throw Error("SpinSystem: T2 times must be positive");
}

SpinSystem SpinSystem::chloroform() {
  return SpinSystem(2 * kPi * 100e6, 2 * kPi * 400e6, 214.5, 0.35, 3.3);
}

bool SpinSystem::weak_coupling_warning() const {
  return std::abs(omega_b - omega_a) < 100.0 * 2 * kPi * j_coupling;
}

FrameSpec FrameSpec::from_carriers(const SpinSystem& sys, double carrier_a, double carrier_b) {
  return {carrier_a, carrier_b, sys.omega_a - carrier_a, sys.omega_b - carrier_b};
}

namespace frames {

FrameSpec on_resonance(const SpinSystem& sys) {
  return {sys.omega_a, sys.omega_b, 0.0, 0.0};
}

FrameSpec conditional_b(const SpinSystem& sys) {
  const double off = kPi * sys.j_coupling;
  return {sys.omega_a, sys.omega_b - off, 0.0, off};
}

FrameSpec offset_a(const SpinSystem& sys) {
  const double off = 4 * kPi * sys.j_coupling;
  return {sys.omega_a - off, sys.omega_b, off, 0.0};
}

}  // namespace frames

void validate(const PulseEvent& event) {
  if (const auto* p = std::get_if<HardPulse>(&event)) {
    if (!(p->rotation_angle > -2 * kPi) || !(p->rotation_angle <= 2 * kPi + 1e-15))
      throw Error("HardPulse: rotation angle outside (-2*pi, 2*pi]");
  } else if (const auto* d = std::get_if<Delay>(&event)) {
    if (d->duration < 0) throw Error("Delay: negative duration");
  }
}

void NoiseConfig::validate() const {
  if (!(std::abs(pulse_amplitude_error) < 0.5))
    throw Error("NoiseConfig: |pulse_amplitude_error| must be < 0.5");
}

Operator frame_hamiltonian(const SpinSystem& sys, const FrameSpec& frame) {
  const Mat iz_a = on_spin(Spin::a, spin_z());
  const Mat iz_b = on_spin(Spin::b, spin_z());
  Mat h = frame.detuning_a * iz_a + frame.detuning_b * iz_b +
          2 * kPi * sys.j_coupling * (iz_a * iz_b);
  return Operator::hermitian(std::move(h));
}

Operator effective_hamiltonian(const SpinSystem& sys, const FrameSpec& frame, Spin observed,
                               PartnerMode partner) {
  const double offset = observed == Spin::a ? frame.detuning_a : frame.detuning_b;
  const double coupling = partner == PartnerMode::conditional_up ? kPi * sys.j_coupling : 0.0;
  return Operator::hermitian((offset + coupling) * spin_z());
}

Mat pulse_matrix2(const HardPulse& pulse, const NoiseConfig& noise) {
  noise.validate();
  const double angle =
      pulse.rotation_angle * (noise.enabled ? 1.0 + noise.pulse_amplitude_error : 1.0);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  const Complex ax = std::exp(Complex(0.0, -pulse.phase_axis));
  // exp(-i*angle*(cos(phi) Ix + sin(phi) Iy)) in closed form
  Mat u(2, 2);
  u << c, -kI * s * ax, -kI * s * std::conj(ax), c;
  return u;
}

Mat pulse_matrix(const HardPulse& pulse, const NoiseConfig& noise, int dim) {
  const Mat u = pulse_matrix2(pulse, noise);
  if (dim == 2) return u;
  if (dim == 4) return on_spin(pulse.target, u);
  throw Error("pulse_matrix: dimension must be 2 or 4");
}

StateVector apply_hard_pulse(const StateVector& psi, const HardPulse& pulse,
                             const NoiseConfig& noise) {
  validate(PulseEvent{pulse});
  return StateVector(pulse_matrix(pulse, noise, psi.dim()) * psi.amplitudes());
}

DensityOperator apply_hard_pulse(const DensityOperator& rho, const HardPulse& pulse,
                                 const NoiseConfig& noise) {
  validate(PulseEvent{pulse});
  const Mat u = pulse_matrix(pulse, noise, rho.dim());
  return DensityOperator(u * rho.matrix() * u.adjoint());
}

namespace {

// Phase-damping factors for every coherence of the two-spin basis |a,b>.
Mat dephasing_mask4(double t, const SpinSystem& sys) {
  const double fa = std::exp(-t / sys.t2_a);
  const double fb = std::exp(-t / sys.t2_b);
  Mat mask(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool a_coh = (i >> 1) != (j >> 1);
      const bool b_coh = (i & 1) != (j & 1);
      mask(i, j) = (a_coh ? fa : 1.0) * (b_coh ? fb : 1.0);
    }
  return mask;
}

}  // namespace

StateVector apply_delay(const StateVector& psi, double duration, const Operator& h,
                        const SpinSystem& sys, const NoiseConfig& noise) {
  (void)sys;
  if (duration < 0) throw Error("apply_delay: negative duration");
  if (noise.dephasing_enabled)
    throw Error("apply_delay: dephasing requires a density operator");
  if (h.dim() != psi.dim()) throw Error("apply_delay: Hamiltonian dimension mismatch");
  return StateVector(propagator(h.matrix(), duration) * psi.amplitudes());
}

DensityOperator apply_delay(const DensityOperator& rho, double duration, const Operator& h,
                            const SpinSystem& sys, const NoiseConfig& noise,
                            std::optional<Spin> single_spin) {
  if (duration < 0) throw Error("apply_delay: negative duration");
  if (h.dim() != rho.dim()) throw Error("apply_delay: Hamiltonian dimension mismatch");
  const Mat u = propagator(h.matrix(), duration);
  Mat out = u * rho.matrix() * u.adjoint();
  if (noise.dephasing_enabled && duration > 0) {
    if (rho.dim() == 4) {
      out = out.cwiseProduct(dephasing_mask4(duration, sys));
    } else {
      if (!single_spin)
        throw Error("apply_delay: dim-2 dephasing needs the spin identity");
      const double t2 = *single_spin == Spin::a ? sys.t2_a : sys.t2_b;
      const double f = std::exp(-duration / t2);
      out(0, 1) *= f;
      out(1, 0) *= f;
    }
  }
  return DensityOperator(std::move(out));
}

DensityOperator apply_crusher(const DensityOperator& rho) {
  Mat out = rho.matrix().diagonal().asDiagonal();
  return DensityOperator(std::move(out));
}

DensityOperator thermal_state(const SpinSystem& sys, double epsilon) {
  (void)sys;
  if (epsilon < 0) throw Error("thermal_state: epsilon must be non-negative");
  const Mat dev = on_spin(Spin::a, spin_z()) + 4.0 * on_spin(Spin::b, spin_z());
  Mat rho = Mat::Identity(4, 4) / 4.0 + epsilon * dev;
  if (min_eigenvalue(rho) < 0)
    throw Error("thermal_state: epsilon too large, state not positive");
  return DensityOperator(std::move(rho));
}

Mat frame_shift(const FrameSpec& from, const FrameSpec& to, double t) {
  const Mat gen = (from.detuning_a - to.detuning_a) * on_spin(Spin::a, spin_z()) +
                  (from.detuning_b - to.detuning_b) * on_spin(Spin::b, spin_z());
  return propagator(gen, -t);  // exp(+i * gen * t)
}

}  // namespace gqc
