#pragma once

// Ideal gate constructors for the cyclic-evolution gate family and the
// controlled phase gate, plus the eigenphase consistency check.

#include "gqcsim/quantum.hpp"

#include <utility>

namespace gqc {

/// Parameters of the single-qubit cyclic-evolution gate: total phase gamma
/// acquired by the cyclic state at spherical coordinates (chi, phi).
struct GateSpec {
  double gamma;  // rad
  double chi;    // polar angle, [0, pi]
  double phi;    // azimuth, [0, 2*pi)

  GateSpec(double gamma, double chi, double phi);
};

/// The 2x2 unitary
///   [ e^{ig} cos^2(x/2) + e^{-ig} sin^2(x/2)    i e^{-ip} sin(g) sin(x) ]
///   [ i e^{+ip} sin(g) sin(x)                   e^{ig} sin^2(x/2) + e^{-ig} cos^2(x/2) ]
/// with g = gamma, x = chi, p = phi.
Operator make_gate(const GateSpec& spec);

/// The orthonormal cyclic pair at (chi, phi):
///   |psi+> = e^{-i phi/2} cos(chi/2)|0> + e^{+i phi/2} sin(chi/2)|1>
///   |psi-> = -e^{-i phi/2} sin(chi/2)|0> + e^{+i phi/2} cos(chi/2)|1>
std::pair<StateVector, StateVector> cyclic_states(double chi, double phi);

/// diag(-i, i, 1, 1) in the |a,b> basis: the b-loop phase gate controlled on
/// spin a, with the global phase fixed by the |11> entry.
Operator make_controlled_gate();

/// Arguments of the eigenvalues of U on cyclic_states(chi, phi); throws if
/// either cyclic state fails to be an eigenvector within 1e-8.
std::pair<double, double> gate_eigenphase_check(const Operator& u, double chi, double phi);

}  // namespace gqc
