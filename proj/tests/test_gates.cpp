#include "test_helpers.hpp"

#include "gqcsim/gates.hpp"

using namespace gqc;
using namespace test_util;

TEST_CASE("gate at (-pi/2, 0, 0) is diag(-i, i)") {
  const Mat u = make_gate(GateSpec(-kPi / 2, 0, 0)).matrix();
  check_matrix_close(u, mat2(Complex(0, -1), 0, 0, Complex(0, 1)), 1e-15);
}

TEST_CASE("gate at (-pi/2, pi/4, 0) is -i/sqrt(2) [[1,1],[1,-1]]") {
  const Mat u = make_gate(GateSpec(-kPi / 2, kPi / 4, 0)).matrix();
  const Complex w = Complex(0, -1) / std::sqrt(2.0);
  check_matrix_close(u, mat2(w, w, w, -w), 1e-15);
}

TEST_CASE("zero total phase gives the identity for any loop coordinates") {
  check_matrix_close(make_gate(GateSpec(0, 1.1, 2.2)).matrix(), Mat::Identity(2, 2), 1e-15);
}

TEST_CASE("gates are unitary across random parameters") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> gamma(-kPi, kPi), chi(0, kPi), phi(0, 2 * kPi - 1e-9);
  for (int trial = 0; trial < 25; ++trial)
    CHECK(is_unitary(make_gate(GateSpec(gamma(rng), chi(rng), phi(rng))).matrix(), 1e-12));
}

TEST_CASE("cyclic states at the pole are the computational basis") {
  const auto [plus, minus] = cyclic_states(0, 0);
  check_vector_close(plus.amplitudes(), StateVector::basis(2, 0).amplitudes(), 1e-15);
  check_vector_close(minus.amplitudes(), StateVector::basis(2, 1).amplitudes(), 1e-15);
}

TEST_CASE("cyclic state at chi = pi/4 matches the explicit superposition") {
  const auto [plus, minus] = cyclic_states(kPi / 4, 0);
  check_vector_close(plus.amplitudes(),
                     Vec{{std::cos(kPi / 8), std::sin(kPi / 8)}}, 1e-15);
  check_vector_close(minus.amplitudes(),
                     Vec{{-std::sin(kPi / 8), std::cos(kPi / 8)}}, 1e-15);
}

TEST_CASE("cyclic states are orthonormal for any coordinates") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> chi(0, kPi), phi(0, 2 * kPi);
  for (int trial = 0; trial < 25; ++trial) {
    const auto [plus, minus] = cyclic_states(chi(rng), phi(rng));
    CHECK(std::abs(plus.overlap(minus)) <= 1e-14);
    CHECK(std::abs(plus.amplitudes().squaredNorm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("controlled gate entries and action") {
  const Operator uc = make_controlled_gate();
  CHECK(uc.matrix()(0, 0) == Complex(0, -1));
  CHECK(uc.matrix()(1, 1) == Complex(0, 1));
  CHECK(uc.matrix()(2, 2) == Complex(1, 0));
  CHECK(uc.matrix()(3, 3) == Complex(1, 0));
  CHECK(is_unitary(uc.matrix(), 1e-15));

  const Vec acted00 = uc.matrix() * StateVector::basis(4, 0).amplitudes();
  check_vector_close(acted00, Complex(0, -1) * StateVector::basis(4, 0).amplitudes(), 1e-15);
  const Vec acted10 = uc.matrix() * StateVector::basis(4, 2).amplitudes();
  check_vector_close(acted10, StateVector::basis(4, 2).amplitudes(), 1e-15);
}

TEST_CASE("eigenphases of the diagonal gate on the pole states") {
  const Operator u1 = make_gate(GateSpec(-kPi / 2, 0, 0));
  const auto [plus_phase, minus_phase] = gate_eigenphase_check(u1, 0, 0);
  CHECK(plus_phase == doctest::Approx(-kPi / 2).epsilon(1e-12));
  CHECK(minus_phase == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("identity has zero eigenphases on any cyclic pair") {
  const auto [p, m] = gate_eigenphase_check(Operator::identity(2), 1.0, 2.0);
  CHECK(p == doctest::Approx(0.0));
  CHECK(m == doctest::Approx(0.0));
}

TEST_CASE("eigenphases of the tilted gate on its tilted cyclic pair") {
  const Operator u2 = make_gate(GateSpec(-kPi / 2, kPi / 4, 0));
  const auto [p, m] = gate_eigenphase_check(u2, kPi / 4, 0);
  CHECK(p == doctest::Approx(-kPi / 2).epsilon(1e-12));
  CHECK(m == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("eigenphase check rejects a mismatched cyclic pair") {
  const Operator u2 = make_gate(GateSpec(-kPi / 2, kPi / 4, 0));
  CHECK_THROWS_AS(gate_eigenphase_check(u2, 0, 0), Error);
}

TEST_CASE("gate spectral decomposition across random parameters") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> gamma(-kPi, kPi), chi(0, kPi), phi(0, 2 * kPi - 1e-9);
  for (int trial = 0; trial < 25; ++trial) {
    const double g = gamma(rng), x = chi(rng), p = phi(rng);
    const auto [plus, minus] = cyclic_states(x, p);
    const Mat projector_sum =
        std::exp(Complex(0, g)) * plus.amplitudes() * plus.amplitudes().adjoint() +
        std::exp(Complex(0, -g)) * minus.amplitudes() * minus.amplitudes().adjoint();
    check_matrix_close(make_gate(GateSpec(g, x, p)).matrix(), projector_sum, 1e-10);
  }
}

TEST_CASE("gate spec validates its angular ranges") {
  CHECK_THROWS_AS(GateSpec(0, -0.1, 0), Error);
  CHECK_THROWS_AS(GateSpec(0, kPi + 0.1, 0), Error);
  CHECK_THROWS_AS(GateSpec(0, 0, 2 * kPi), Error);
  CHECK_NOTHROW(GateSpec(-kPi / 2, kPi, 0));
}
