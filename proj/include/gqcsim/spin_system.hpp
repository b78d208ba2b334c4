#pragma once

// Physical model of a heteronuclear two-spin system: the weak-coupling
// Hamiltonian, rotating-frame arithmetic, hard pulses, delays with optional
// T2 dephasing, and the gradient crusher.

#include "gqcsim/quantum.hpp"

#include <optional>
#include <variant>

namespace gqc {

/// Two-spin constants. Larmor frequencies in rad/s, scalar coupling in Hz,
/// transverse relaxation times in seconds.
struct SpinSystem {
  double omega_a;     // rad/s
  double omega_b;     // rad/s
  double j_coupling;  // Hz
  double t2_a;        // s
  double t2_b;        // s

  SpinSystem(double omega_a, double omega_b, double j_coupling, double t2_a, double t2_b);

  /// Carbon-13 / proton chloroform sample defaults: 100 MHz and 400 MHz
  /// Larmor frequencies, J = 214.5 Hz, T2 = 0.35 s and 3.3 s.
  static SpinSystem chloroform();

  /// True when |omega_b - omega_a| < 100 * 2*pi*J, i.e. the weak-coupling
  /// (spin-selective pulse) picture is questionable.
  bool weak_coupling_warning() const;
};

/// Per-channel rotating-frame carriers (rad/s). The residual z-field
/// detunings omega - carrier are stored alongside: at GHz-scale carriers the
/// double grid is coarser than the few-hundred-rad/s offsets of interest, so
/// recovering them by subtraction would quantize the frame physics.
struct FrameSpec {
  double carrier_a = 0;
  double carrier_b = 0;
  double detuning_a = 0;  // omega_a - carrier_a, rad/s
  double detuning_b = 0;  // omega_b - carrier_b, rad/s

  static FrameSpec from_carriers(const SpinSystem& sys, double carrier_a, double carrier_b);
};

namespace frames {
/// Both channels on resonance; only the coupling term survives.
FrameSpec on_resonance(const SpinSystem& sys);
/// b carrier at omega_b - pi*J: the b-spin Hamiltonian becomes 2*pi*J*Iz^b
/// when spin a is up and zero when spin a is down.
FrameSpec conditional_b(const SpinSystem& sys);
/// a carrier at omega_a - 4*pi*J, giving H_a = 4*pi*J*Iz^a plus coupling.
FrameSpec offset_a(const SpinSystem& sys);
}  // namespace frames

/// Instantaneous resonant rotation of one spin about an axis in the xy-plane:
/// exp(-i * angle * (cos(phase_axis) Ix + sin(phase_axis) Iy)).
struct HardPulse {
  Spin target;
  double phase_axis;      // rad, x = 0, y = pi/2
  double rotation_angle;  // rad, in (-2*pi, 2*pi]
};

struct Delay {
  double duration;  // s, >= 0
};

/// z-gradient crusher: erases every coherence, keeps populations.
struct GradientCrusher {};

using PulseEvent = std::variant<HardPulse, Delay, GradientCrusher>;

void validate(const PulseEvent& event);

struct NoiseConfig {
  bool enabled = false;                 // gates the pulse amplitude error
  double pulse_amplitude_error = 0.0;   // fractional over/under-rotation, |e| < 0.5
  bool dephasing_enabled = false;       // gates T2 phase damping on delays

  void validate() const;
};

/// 4x4 Hermitian frame Hamiltonian in rad/s:
/// (omega_a - carrier_a) Iz^a + (omega_b - carrier_b) Iz^b + 2*pi*J Iz^a Iz^b.
Operator frame_hamiltonian(const SpinSystem& sys, const FrameSpec& frame);

/// Effective single-spin Hamiltonian (2x2, rad/s) seen by one spin during a
/// delay. The coupling contributes +pi*J*Iz when the partner spin is held
/// up ("conditional" branch); refocused/decoupled sequences drop it.
enum class PartnerMode { conditional_up, decoupled };
Operator effective_hamiltonian(const SpinSystem& sys, const FrameSpec& frame, Spin observed,
                               PartnerMode partner);

// Single-spin rotation matrix of a hard pulse (amplitude error applied when
// noise is enabled) and its embedding into the requested dimension.
Mat pulse_matrix2(const HardPulse& pulse, const NoiseConfig& noise);
Mat pulse_matrix(const HardPulse& pulse, const NoiseConfig& noise, int dim);

StateVector apply_hard_pulse(const StateVector& psi, const HardPulse& pulse,
                             const NoiseConfig& noise);
DensityOperator apply_hard_pulse(const DensityOperator& rho, const HardPulse& pulse,
                                 const NoiseConfig& noise);

/// Unitary evolution exp(-i H t). With dephasing enabled the two-spin density
/// path additionally damps single-spin coherences by exp(-t/T2_spin) and
/// two-spin coherences by the product of both factors; the dim-2 density path
/// takes the explicit spin identity. Pure states reject dephasing.
StateVector apply_delay(const StateVector& psi, double duration, const Operator& h,
                        const SpinSystem& sys, const NoiseConfig& noise);
DensityOperator apply_delay(const DensityOperator& rho, double duration, const Operator& h,
                            const SpinSystem& sys, const NoiseConfig& noise,
                            std::optional<Spin> single_spin = std::nullopt);

/// Zeroes every off-diagonal element in the computational basis.
DensityOperator apply_crusher(const DensityOperator& rho);

/// I/4 + epsilon * (Iz^a + 4 Iz^b). Rejects epsilon outside [0, 0.1).
DensityOperator thermal_state(const SpinSystem& sys, double epsilon);

/// Unitary mapping a state from frame `from` to frame `to` at time t
/// (carrier shifts are z-rotations, so frame changes commute with delays).
/// Computed from the stored detunings: carrier_to - carrier_from =
/// detuning_from - detuning_to.
Mat frame_shift(const FrameSpec& from, const FrameSpec& to, double t);

}  // namespace gqc
