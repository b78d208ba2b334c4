#include "test_helpers.hpp"

#include "gqcsim/spin_system.hpp"

using namespace gqc;
using namespace test_util;

namespace {

const SpinSystem sys = SpinSystem::chloroform();

Mat iz_a() { return on_spin(Spin::a, spin_z()); }
Mat iz_b() { return on_spin(Spin::b, spin_z()); }

}  // namespace

TEST_CASE("conditional frame makes the b Hamiltonian block diagonal in a") {
  const Mat h = frame_hamiltonian(sys, frames::conditional_b(sys)).matrix();
  const double twopij = 2 * kPi * sys.j_coupling;
  // a up block: 2*pi*J*Iz^b; a down block: zero
  check_matrix_close(h.block(0, 0, 2, 2), twopij * spin_z(), 1e-9);
  check_matrix_close(h.block(2, 2, 2, 2), Mat::Zero(2, 2), 1e-9);
}

TEST_CASE("on-resonance frame keeps only the coupling term") {
  const Mat h = frame_hamiltonian(sys, frames::on_resonance(sys)).matrix();
  check_matrix_close(h, 2 * kPi * sys.j_coupling * (iz_a() * iz_b()).eval(), 1e-9);
}

TEST_CASE("offset a frame gives 4*pi*J*Iz^a plus coupling") {
  const Mat h = frame_hamiltonian(sys, frames::offset_a(sys)).matrix();
  const Mat expected =
      4 * kPi * sys.j_coupling * iz_a() + 2 * kPi * sys.j_coupling * (iz_a() * iz_b());
  check_matrix_close(h, expected, 1e-9);
}

TEST_CASE("hard pulse rotations on basis states") {
  const NoiseConfig off{};
  const StateVector zero = StateVector::basis(2, 0);

  // Rx(pi)|0> = -i|1>
  const StateVector flipped = apply_hard_pulse(zero, HardPulse{Spin::a, 0, kPi}, off);
  check_vector_close(flipped.amplitudes(), Vec{{Complex(0, 0), Complex(0, -1)}}, 1e-15);

  // Ry(pi/2)|0> = (|0> + |1>)/sqrt(2) up to a global phase
  const StateVector rotated = apply_hard_pulse(zero, HardPulse{Spin::a, kPi / 2, kPi / 2}, off);
  check_state_close(rotated, ket({1, 1}), 1e-15);
}

TEST_CASE("hard pulse conjugation matches the rotation of Iz") {
  // R_x(pi/3) Iz R_x(pi/3)^dag = cos(pi/3) Iz - sin(pi/3) Iy, checked against
  // direct matrix exponentiation of the generator
  const double angle = kPi / 3;
  const Mat u_closed = pulse_matrix2(HardPulse{Spin::a, 0, angle}, NoiseConfig{});
  const Mat u_expm = propagator(spin_x(), angle);
  check_matrix_close(u_closed, u_expm, 1e-12);
  const Mat rotated = u_expm * spin_z() * u_expm.adjoint();
  check_matrix_close(rotated, std::cos(angle) * spin_z() - std::sin(angle) * spin_y(), 1e-12);
}

TEST_CASE("delay of 1/(8J) under 4*pi*J*Iz^a rotates spin a about z by pi/2") {
  const FrameSpec frame = frames::offset_a(sys);
  const Operator h = Operator::hermitian((4 * kPi * sys.j_coupling * spin_z()).eval());
  const double t = 1 / (8 * sys.j_coupling);
  const StateVector plus = ket({1, 1});
  const StateVector out = apply_delay(plus, t, h, sys, NoiseConfig{});
  check_state_close(out, ket({1, Complex(0, 1)}), 1e-12);  // x axis -> y axis
  CHECK(frame.detuning_a == doctest::Approx(4 * kPi * sys.j_coupling));
}

TEST_CASE("zero-duration delay is the identity") {
  const Operator h = frame_hamiltonian(sys, frames::conditional_b(sys));
  std::mt19937_64 rng(3);
  const StateVector psi = haar_random_state(4, rng);
  check_vector_close(apply_delay(psi, 0.0, h, sys, NoiseConfig{}).amplitudes(),
                     psi.amplitudes(), 1e-15);
}

TEST_CASE("J-coupling evolution for 1/(2J) maps Iy^b to -2 Ix^b Iz^a") {
  // product-operator oracle by direct matrix exponentiation
  const Mat h_j = 2 * kPi * sys.j_coupling * (iz_a() * iz_b()).eval();
  const Mat u = propagator(h_j, 1 / (2 * sys.j_coupling));
  const Mat evolved = u * on_spin(Spin::b, spin_y()) * u.adjoint();
  const Mat expected = -2.0 * (on_spin(Spin::b, spin_x()) * iz_a()).eval();
  check_matrix_close(evolved, expected, 1e-12);
}

TEST_CASE("noiseless delays preserve purity and norm") {
  const Operator h = frame_hamiltonian(sys, frames::conditional_b(sys));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector psi = haar_random_state(4, rng);
    const StateVector out = apply_delay(psi, 1e-3, h, sys, NoiseConfig{});
    CHECK(std::abs(out.amplitudes().squaredNorm() - 1.0) <= 1e-12);
    const DensityOperator rho =
        apply_delay(DensityOperator::from_state(psi), 1e-3, h, sys, NoiseConfig{});
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("crusher erases coherences and is idempotent") {
  const DensityOperator plus = DensityOperator::from_state(ket({1, 1}));
  const DensityOperator crushed = apply_crusher(plus);
  check_matrix_close(crushed.matrix(), Mat::Identity(2, 2) / 2.0, 1e-15);
  check_matrix_close(apply_crusher(crushed).matrix(), crushed.matrix(), 0.0);
  CHECK(crushed.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));

  Mat diag = Mat::Zero(4, 4);
  diag(0, 0) = 0.25;
  diag(1, 1) = 0.15;
  diag(2, 2) = 0.35;
  diag(3, 3) = 0.25;
  const DensityOperator diag_rho(diag);
  check_matrix_close(apply_crusher(diag_rho).matrix(), diag_rho.matrix(), 0.0);
}

TEST_CASE("crusher after the first preparation pulse keeps Iz^a + 2 Iz^b") {
  // hand product-operator result: Rx^b(pi/3) tips 4 Iz^b to
  // 2 Iz^b - 2 sqrt(3) Iy^b, and the crusher keeps the diagonal part
  const double eps = 1e-5;
  const DensityOperator rho_th = thermal_state(sys, eps);
  const DensityOperator tipped =
      apply_hard_pulse(rho_th, HardPulse{Spin::b, 0, kPi / 3}, NoiseConfig{});
  const DensityOperator crushed = apply_crusher(tipped);
  const Mat expected = Mat::Identity(4, 4) / 4.0 + eps * (iz_a() + 2.0 * iz_b());
  check_matrix_close(crushed.matrix(), expected, 1e-16);
}

TEST_CASE("thermal state diagonal and positivity") {
  const double eps = 1e-5;
  const DensityOperator rho = thermal_state(sys, eps);
  // deviation diagonal proportional to (5, -3, 3, -5)/2
  Vec expected(4);
  expected << 0.25 + 2.5 * eps, 0.25 - 1.5 * eps, 0.25 + 1.5 * eps, 0.25 - 2.5 * eps;
  check_vector_close(rho.matrix().diagonal(), expected, 1e-15);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));

  check_matrix_close(thermal_state(sys, 0.0).matrix(), Mat::Identity(4, 4) / 4.0, 0.0);
  CHECK_THROWS_AS(thermal_state(sys, 0.2), Error);
  CHECK_THROWS_AS(thermal_state(sys, -1e-3), Error);
}

TEST_CASE("dephasing damps coherences by exactly exp(-t/T2)") {
  NoiseConfig noise;
  noise.dephasing_enabled = true;
  const double t = 2.5e-3;

  // single-spin coherence of spin a in the two-spin space
  const DensityOperator joint =
      DensityOperator::from_state(tensor(ket({1, 1}), StateVector::basis(2, 0)));
  const Operator h0 = Operator::hermitian(Mat::Zero(4, 4));
  const DensityOperator damped = apply_delay(joint, t, h0, sys, noise);
  const double fa = std::exp(-t / sys.t2_a);
  CHECK(damped.matrix()(0, 2).real() == doctest::Approx(0.5 * fa).epsilon(1e-12));

  // two-spin coherence decays by the product of both factors
  const StateVector bell = ket({1, 0, 0, 1});
  const DensityOperator damped2 =
      apply_delay(DensityOperator::from_state(bell), t, h0, sys, noise);
  const double fb = std::exp(-t / sys.t2_b);
  CHECK(damped2.matrix()(0, 3).real() == doctest::Approx(0.5 * fa * fb).epsilon(1e-12));

  // dim-2 path takes the explicit spin identity
  const DensityOperator single = DensityOperator::from_state(ket({1, 1}));
  const Operator h2 = Operator::hermitian(Mat::Zero(2, 2));
  const DensityOperator damped_b = apply_delay(single, t, h2, sys, noise, Spin::b);
  CHECK(damped_b.matrix()(0, 1).real() == doctest::Approx(0.5 * fb).epsilon(1e-12));
  CHECK_THROWS_AS(apply_delay(single, t, h2, sys, noise), Error);

  // pure states reject dephasing
  CHECK_THROWS_AS(apply_delay(ket({1, 1}), t, h2, sys, noise), Error);
}

TEST_CASE("pulses on spin b leave the reduced state of spin a unchanged") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector joint = haar_random_state(4, rng);
    const DensityOperator before = DensityOperator::from_state(joint);
    const DensityOperator after =
        apply_hard_pulse(before, HardPulse{Spin::b, 0.7, 1.9}, NoiseConfig{});
    check_matrix_close(partial_trace(after, Spin::a).matrix(),
                       partial_trace(before, Spin::a).matrix(), 1e-12);
  }
}

TEST_CASE("frame change commutes with evolution for carrier z-shifts") {
  const FrameSpec f1 = frames::on_resonance(sys);
  const FrameSpec f2 = frames::conditional_b(sys);
  const double t = 3.7e-3;
  std::mt19937_64 rng(23);
  const StateVector psi = haar_random_state(4, rng);

  const Vec evolved_then_shifted =
      frame_shift(f1, f2, t) *
      apply_delay(psi, t, frame_hamiltonian(sys, f1), sys, NoiseConfig{}).amplitudes();
  const Vec shifted_then_evolved =
      apply_delay(psi, t, frame_hamiltonian(sys, f2), sys, NoiseConfig{}).amplitudes();
  check_vector_close(evolved_then_shifted, shifted_then_evolved, 1e-10);
}

TEST_CASE("pulse amplitude error scales the rotation angle") {
  NoiseConfig noise;
  noise.enabled = true;
  noise.pulse_amplitude_error = 0.02;
  const Mat noisy = pulse_matrix2(HardPulse{Spin::a, 0, kPi / 2}, noise);
  const Mat scaled = pulse_matrix2(HardPulse{Spin::a, 0, kPi / 2 * 1.02}, NoiseConfig{});
  check_matrix_close(noisy, scaled, 1e-15);

  noise.pulse_amplitude_error = 0.6;
  CHECK_THROWS_AS(pulse_matrix2(HardPulse{Spin::a, 0, kPi}, noise), Error);
}

TEST_CASE("pulse event validation") {
  CHECK_THROWS_AS(validate(PulseEvent{HardPulse{Spin::a, 0, 3 * kPi}}), Error);
  CHECK_THROWS_AS(validate(PulseEvent{Delay{-1e-3}}), Error);
  CHECK_NOTHROW(validate(PulseEvent{HardPulse{Spin::a, 0, 2 * kPi}}));
}

TEST_CASE("spin system constants and warnings") {
  CHECK(sys.j_coupling == doctest::Approx(214.5));
  CHECK(sys.t2_a == doctest::Approx(0.35));
  CHECK(sys.t2_b == doctest::Approx(3.3));
  CHECK_FALSE(sys.weak_coupling_warning());

  const SpinSystem narrow(2 * kPi * 1e6, 2 * kPi * 1.001e6, 214.5, 0.35, 3.3);
  CHECK(narrow.weak_coupling_warning());
  CHECK_THROWS_AS(SpinSystem(1, 2, -5, 0.35, 3.3), Error);
  CHECK_THROWS_AS(SpinSystem(1, 2, 214.5, -0.35, 3.3), Error);
}
