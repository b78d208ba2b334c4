#pragma once

#include <doctest.h>

#include "gqcsim/quantum.hpp"

#include <numbers>

namespace test_util {

inline constexpr double kPi = std::numbers::pi;

inline void check_matrix_close(const gqc::Mat& a, const gqc::Mat& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  CHECK((a - b).cwiseAbs().maxCoeff() <= tol);
}

inline void check_vector_close(const gqc::Vec& a, const gqc::Vec& b, double tol) {
  REQUIRE(a.size() == b.size());
  CHECK((a - b).cwiseAbs().maxCoeff() <= tol);
}

// equality up to a global phase
inline void check_state_close(const gqc::StateVector& a, const gqc::StateVector& b, double tol) {
  CHECK(std::abs(a.overlap(b)) >= 1.0 - tol);
}

inline gqc::Mat mat2(gqc::Complex a, gqc::Complex b, gqc::Complex c, gqc::Complex d) {
  gqc::Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline gqc::StateVector ket(std::initializer_list<gqc::Complex> amps) {
  gqc::Vec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const auto& a : amps) v(i++) = a;
  return gqc::StateVector::normalized(std::move(v));
}

}  // namespace test_util
