#pragma once

// Cyclic Bloch-sphere evolutions: trajectory sampling, total / dynamic /
// geometric phase decomposition, loop solid angles, and the linear
// dynamic-vs-geometric phase fit.

#include "gqcsim/sequence.hpp"

#include <utility>
#include <vector>

namespace gqc {

/// Raised when an evolution fails to return to its initial ray.
class CyclicityError : public Error {
 public:
  CyclicityError(const std::string& message, double reopening_distance);
  double reopening_distance() const { return distance_; }

 private:
  double distance_;
};

struct TrajectorySample {
  double time;        // s
  StateVector state;  // dim 2
  Mat hamiltonian;    // 2x2, rad/s (pulse segments: formal arc generator)
};

/// One program event's worth of samples. Pulse segments are instantaneous:
/// t_begin == t_end and every sample shares that instant; the arc is
/// parametrized by rotation fraction instead of time.
struct TrajectorySegment {
  bool is_pulse = false;
  double t_begin = 0;
  double t_end = 0;
  std::vector<TrajectorySample> samples;
};

class Trajectory {
 public:
  Trajectory(StateVector initial, std::vector<TrajectorySegment> segments, double closure_tol);

  const StateVector& initial_state() const { return initial_; }
  const StateVector& final_state() const { return final_; }
  const std::vector<TrajectorySegment>& segments() const { return segments_; }
  bool closed() const { return closed_; }
  double reopening_distance() const { return reopening_distance_; }
  double duration() const;

  /// All samples in order (the bare initial sample for an empty program).
  std::vector<TrajectorySample> flattened() const;

 private:
  StateVector initial_;
  StateVector final_;
  std::vector<TrajectorySegment> segments_;
  bool closed_;
  double reopening_distance_;
};

struct EvolveOptions {
  Spin observed = Spin::b;
  PartnerMode partner = PartnerMode::conditional_up;
  int samples_per_event = 64;   // >= 8, rounded up to a multiple of 4
  double closure_tol = 1e-8;    // on the phase-minimized vector distance
  NoiseConfig noise{};          // pulse amplitude error only; trajectories stay pure
};

/// Runs a single-spin program and samples the trajectory: delays are
/// subdivided in time, pulses contribute a dense sampling of the rotation
/// arc with the pulse generator recorded as the instantaneous Hamiltonian.
/// Throws CyclicityError (carrying the reopening distance) if the final
/// state does not match the initial one up to a global phase.
Trajectory evolve_cyclic(const StateVector& initial, const CompiledProgram& prog,
                         const SpinSystem& sys, const EvolveOptions& opts = {});

/// arg<psi(0)|psi(tau)>, principal value in (-pi, pi].
double total_phase(const Trajectory& traj);

/// Per-event accumulation of arg increments (arg of the overlap across each
/// segment); representable outside (-pi, pi] before any final wrapping.
double total_phase_accumulated(const Trajectory& traj);

/// Discrete parallel-transport connection: the sum of overlap args between
/// consecutive samples. For Schrödinger-sampled paths this converges to the
/// dynamic phase, giving a quadrature-free cross-check.
double connection_phase(const Trajectory& traj);

/// -integral of <H> dt by composite Simpson per delay segment, with a
/// refinement-doubling error check (< 1e-7). Pulse segments take zero time.
double dynamic_phase(const Trajectory& traj);

/// total_phase - dynamic_phase, wrapped to (-pi, pi].
double geometric_phase(const Trajectory& traj);

enum class LoopVariant { north, south_mirror, efn };

/// Parametrized loop family of the experiments:
///  - north:        N down the phi=-pi/2 meridian to polar theta, east by
///                  delta_phi along the latitude, meridian back to N.
///  - south_mirror: equator mirror image; starts at S, rises to polar theta
///                  (measured from +z) at phi=+pi/2, east by delta_phi.
///  - efn:          starts at (theta, phi=0), east by pi along the latitude,
///                  returns through the north pole (delta_phi fixed at pi).
struct LoopGeometry {
  LoopVariant variant = LoopVariant::north;
  double theta = 0;      // polar angle of the turning point, rad
  double delta_phi = 0;  // azimuthal span of the latitude arc, rad
};

class BlochLoop {
 public:
  BlochLoop(LoopGeometry geometry, std::vector<Eigen::Vector3d> points);
  static BlochLoop from_parameters(const LoopGeometry& geometry, int points_per_arc = 4096);
  static BlochLoop from_trajectory(const Trajectory& traj, const LoopGeometry& geometry);

  const LoopGeometry& geometry() const { return geometry_; }
  const std::vector<Eigen::Vector3d>& points() const { return points_; }

 private:
  LoopGeometry geometry_;
  std::vector<Eigen::Vector3d> points_;
};

/// Signed solid angle by the spherical line integral of (1 - cos chi) dphi
/// over the sampled path, evaluated in centroid-aligned coordinates (the
/// form is singular at the south pole, and the solid angle is rotation
/// invariant, so the loop is first rotated to sit around +z).
double solid_angle(const BlochLoop& loop);

/// Closed form per variant: north +delta_phi*(1-cos theta),
/// south_mirror -delta_phi*(1+cos theta), efn +pi*(1-cos theta).
double solid_angle_closed_form(const LoopGeometry& geometry);

struct PhaseReport {
  double gamma_total;      // rad, principal value
  double gamma_dynamic;    // rad
  double gamma_geometric;  // rad, principal value
  double solid_angle;      // sr, signed
};

/// Assembles the full report and checks gamma_geometric = -solid_angle/2
/// (mod 2pi) within `consistency_tol`.
PhaseReport phase_report(const Trajectory& traj, const BlochLoop& loop,
                         double consistency_tol = 1e-6);

struct UnconventionalFit {
  double alpha_g;       // rad
  double eta;           // dimensionless
  double max_residual;  // rad
};

/// Least-squares line gamma_d = alpha_g + eta * gamma_g over a sweep of
/// (gamma_dynamic, gamma_geometric) points. Needs >= 3 points with spread
/// in gamma_geometric.
UnconventionalFit fit_unconventional(const std::vector<std::pair<double, double>>& dyn_geo);

}  // namespace gqc
