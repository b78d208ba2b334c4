#include "gqcsim/phase.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gqc {

namespace {
constexpr double kPi = std::numbers::pi;
}

CyclicityError::CyclicityError(const std::string& message, double reopening_distance)
    : Error(message + " (reopening distance " + std::to_string(reopening_distance) + ")"),
      distance_(reopening_distance) {}

namespace {

// overlap deficit 1 - |<a|b>|: zero iff equal up to a global phase
double phase_min_distance(const StateVector& a, const StateVector& b) {
  return std::max(0.0, 1.0 - std::abs(a.overlap(b)));
}

}  // namespace

Trajectory::Trajectory(StateVector initial, std::vector<TrajectorySegment> segments,
                       double closure_tol)
    : initial_(std::move(initial)),
      final_(segments.empty() || segments.back().samples.empty()
                 ? initial_
                 : segments.back().samples.back().state),
      segments_(std::move(segments)),
      closed_(false),
      reopening_distance_(0) {
  double t = 0;
  for (const auto& seg : segments_) {
    if (seg.samples.empty()) throw Error("Trajectory: empty segment");
    if (std::abs(seg.t_begin - t) > 1e-15)
      throw Error("Trajectory: segment does not start where the previous one ended");
    if (seg.t_end < seg.t_begin) throw Error("Trajectory: segment with negative duration");
    t = seg.t_end;
  }
  reopening_distance_ = phase_min_distance(initial_, final_);
  closed_ = reopening_distance_ <= closure_tol;
}

double Trajectory::duration() const {
  return segments_.empty() ? 0.0 : segments_.back().t_end;
}

std::vector<TrajectorySample> Trajectory::flattened() const {
  std::vector<TrajectorySample> out;
  if (segments_.empty()) {
    out.push_back({0.0, initial_, Mat::Zero(2, 2)});
    return out;
  }
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& samples = segments_[s].samples;
    // segments share boundary states; keep the first segment's opening sample
    for (std::size_t k = (s == 0 ? 0 : 1); k < samples.size(); ++k) out.push_back(samples[k]);
  }
  return out;
}

Trajectory evolve_cyclic(const StateVector& initial, const CompiledProgram& prog,
                         const SpinSystem& sys, const EvolveOptions& opts) {
  if (initial.dim() != 2) throw Error("evolve_cyclic: initial state must be a single spin");
  int n = std::max(8, opts.samples_per_event);
  n += (4 - n % 4) % 4;

  for (const auto& event : prog.events) {
    if (const auto* pulse = std::get_if<HardPulse>(&event)) {
      if (pulse->target != opts.observed)
        throw Error("evolve_cyclic: program must act on the observed spin only");
    } else if (std::holds_alternative<GradientCrusher>(event)) {
      throw Error("evolve_cyclic: program contains a crusher");
    }
  }

  const Mat h_delay = effective_hamiltonian(sys, prog.frame, opts.observed, opts.partner).matrix();
  NoiseConfig pulse_noise = opts.noise;
  pulse_noise.dephasing_enabled = false;

  std::vector<TrajectorySegment> segments;
  StateVector state = initial;
  double t = 0;

  for (const auto& event : prog.events) {
    TrajectorySegment seg;
    if (const auto* delay = std::get_if<Delay>(&event)) {
      seg.is_pulse = false;
      seg.t_begin = t;
      seg.t_end = t + delay->duration;
      if (delay->duration == 0) {
        seg.samples.push_back({t, state, h_delay});
      } else {
        const double dt = delay->duration / n;
        const Mat step = propagator(h_delay, dt);
        Vec amps = state.amplitudes();
        seg.samples.push_back({t, state, h_delay});
        for (int k = 1; k <= n; ++k) {
          amps = step * amps;
          seg.samples.push_back({t + k * dt, StateVector::normalized(amps), h_delay});
        }
        state = seg.samples.back().state;
        t = seg.t_end;
      }
    } else {
      const auto& pulse = std::get<HardPulse>(event);
      seg.is_pulse = true;
      seg.t_begin = seg.t_end = t;
      // formal generator per unit arc parameter; carries no time measure
      const Mat gen = pulse.rotation_angle * (std::cos(pulse.phase_axis) * spin_x() +
                                              std::sin(pulse.phase_axis) * spin_y());
      seg.samples.push_back({t, state, gen});
      for (int k = 1; k <= n; ++k) {
        const double frac = static_cast<double>(k) / n;
        HardPulse partial = pulse;
        partial.rotation_angle = pulse.rotation_angle * frac;
        seg.samples.push_back({t, apply_hard_pulse(state, partial, pulse_noise), gen});
      }
      state = seg.samples.back().state;
    }
    segments.push_back(std::move(seg));
  }

  Trajectory traj(initial, std::move(segments), opts.closure_tol);
  if (!traj.closed())
    throw CyclicityError("evolve_cyclic: trajectory did not close", traj.reopening_distance());
  return traj;
}

double total_phase(const Trajectory& traj) {
  if (!traj.closed()) throw Error("total_phase: trajectory is not closed");
  const Complex ov = traj.initial_state().overlap(traj.final_state());
  return std::arg(ov);
}

double total_phase_accumulated(const Trajectory& traj) {
  double acc = 0;
  for (const auto& seg : traj.segments())
    acc += std::arg(seg.samples.front().state.overlap(seg.samples.back().state));
  return acc;
}

double connection_phase(const Trajectory& traj) {
  const auto samples = traj.flattened();
  double acc = 0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k)
    acc += std::arg(samples[k].state.overlap(samples[k + 1].state));
  return acc;
}

namespace {

double simpson(const std::vector<double>& values, double step) {
  const std::size_t n = values.size() - 1;
  double odd = 0, even = 0;
  for (std::size_t k = 1; k < n; k += 2) odd += values[k];
  for (std::size_t k = 2; k < n; k += 2) even += values[k];
  return step / 3.0 * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

}  // namespace

double dynamic_phase(const Trajectory& traj) {
  if (!traj.closed()) throw Error("dynamic_phase: trajectory is not closed");
  double integral = 0;
  for (const auto& seg : traj.segments()) {
    if (seg.is_pulse || seg.t_end == seg.t_begin) continue;
    const std::size_t n = seg.samples.size() - 1;
    if (n < 4 || n % 4 != 0)
      throw Error("dynamic_phase: insufficient samples for the refinement check");
    std::vector<double> values(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const auto& s = seg.samples[k];
      values[k] = std::real(s.state.amplitudes().dot(s.hamiltonian * s.state.amplitudes()));
    }
    const double dt = (seg.t_end - seg.t_begin) / static_cast<double>(n);
    const double fine = simpson(values, dt);
    std::vector<double> coarse_values;
    coarse_values.reserve(n / 2 + 1);
    for (std::size_t k = 0; k <= n; k += 2) coarse_values.push_back(values[k]);
    const double coarse = simpson(coarse_values, 2 * dt);
    if (std::abs(fine - coarse) >= 1e-7)
      throw Error("dynamic_phase: quadrature refinement check failed");
    integral += fine;
  }
  return -integral;
}

double geometric_phase(const Trajectory& traj) {
  return wrap_angle(total_phase(traj) - dynamic_phase(traj));
}

// ---------------------------------------------------------------------------
// Loops and solid angles
// ---------------------------------------------------------------------------

BlochLoop::BlochLoop(LoopGeometry geometry, std::vector<Eigen::Vector3d> points)
    : geometry_(geometry), points_(std::move(points)) {
  if (points_.size() < 2) throw Error("BlochLoop: need at least two points");
  for (const auto& p : points_)
    if (std::abs(p.norm() - 1.0) > 1e-10)
      throw Error("BlochLoop: point off the unit sphere beyond 1e-10");
  if ((points_.front() - points_.back()).norm() > 1e-8)
    throw Error("BlochLoop: loop does not close within 1e-8");
}

namespace {

Eigen::Vector3d sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void append_arc(std::vector<Eigen::Vector3d>& pts, int n,
                const std::function<Eigen::Vector3d(double)>& curve) {
  const std::size_t skip_first = pts.empty() ? 0 : 1;
  for (int k = static_cast<int>(skip_first); k <= n; ++k)
    pts.push_back(curve(static_cast<double>(k) / n));
}

}  // namespace

BlochLoop BlochLoop::from_parameters(const LoopGeometry& g, int points_per_arc) {
  if (points_per_arc < 2) throw Error("BlochLoop: points_per_arc must be >= 2");
  if (g.theta < 0 || g.theta > kPi) throw Error("BlochLoop: theta outside [0, pi]");
  std::vector<Eigen::Vector3d> pts;
  const int n = points_per_arc;
  switch (g.variant) {
    case LoopVariant::north: {
      const double phi0 = -kPi / 2;
      append_arc(pts, n, [&](double s) { return sphere_point(s * g.theta, phi0); });
      append_arc(pts, n, [&](double s) { return sphere_point(g.theta, phi0 + s * g.delta_phi); });
      append_arc(pts, n,
                 [&](double s) { return sphere_point((1 - s) * g.theta, phi0 + g.delta_phi); });
      break;
    }
    case LoopVariant::south_mirror: {
      const double phi0 = kPi / 2;
      append_arc(pts, n, [&](double s) { return sphere_point(kPi - s * (kPi - g.theta), phi0); });
      append_arc(pts, n, [&](double s) { return sphere_point(g.theta, phi0 + s * g.delta_phi); });
      append_arc(pts, n, [&](double s) {
        return sphere_point(g.theta + s * (kPi - g.theta), phi0 + g.delta_phi);
      });
      break;
    }
    case LoopVariant::efn: {
      if (std::abs(g.delta_phi - kPi) > 1e-12)
        throw Error("BlochLoop: the efn variant requires delta_phi = pi");
      append_arc(pts, n, [&](double s) { return sphere_point(g.theta, s * kPi); });
      append_arc(pts, n, [&](double s) { return sphere_point((1 - s) * g.theta, kPi); });
      append_arc(pts, n, [&](double s) { return sphere_point(s * g.theta, 0.0); });
      break;
    }
  }
  return BlochLoop(g, std::move(pts));
}

BlochLoop BlochLoop::from_trajectory(const Trajectory& traj, const LoopGeometry& geometry) {
  std::vector<Eigen::Vector3d> pts;
  for (const auto& sample : traj.flattened()) {
    Eigen::Vector3d p = bloch_vector(sample.state);
    if (!pts.empty() && (p - pts.back()).norm() < 1e-12) continue;
    pts.push_back(p);
  }
  if (pts.size() < 2) pts.push_back(pts.front());
  // close exactly: cyclic states revisit the initial ray
  if ((pts.front() - pts.back()).norm() <= 1e-8) pts.back() = pts.front();
  return BlochLoop(geometry, std::move(pts));
}

double solid_angle(const BlochLoop& loop) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(loop.points().size());
  for (const auto& p : loop.points())
    if (pts.empty() || (p - pts.back()).norm() > 1e-13) pts.push_back(p);
  if (pts.size() >= 2 && (pts.front() - pts.back()).norm() <= 1e-8) pts.pop_back();
  if (pts.size() < 3) return 0.0;

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  if (centroid.norm() > 1e-12)
    rot = Eigen::Quaterniond::FromTwoVectors(centroid, Eigen::Vector3d::UnitZ())
              .toRotationMatrix();

  double omega = 0;
  const std::size_t m = pts.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Eigen::Vector3d p = rot * pts[k];
    const Eigen::Vector3d q = rot * pts[(k + 1) % m];
    const double chi_p = std::acos(std::clamp(p.z(), -1.0, 1.0));
    const double chi_q = std::acos(std::clamp(q.z(), -1.0, 1.0));
    const double dphi = wrap_angle(std::atan2(q.y(), q.x()) - std::atan2(p.y(), p.x()));
    omega += (1.0 - std::cos(0.5 * (chi_p + chi_q))) * dphi;
  }
  return omega;
}

double solid_angle_closed_form(const LoopGeometry& g) {
  switch (g.variant) {
    case LoopVariant::north: return g.delta_phi * (1.0 - std::cos(g.theta));
    case LoopVariant::south_mirror: return -g.delta_phi * (1.0 + std::cos(g.theta));
    case LoopVariant::efn: return kPi * (1.0 - std::cos(g.theta));
  }
  throw Error("solid_angle_closed_form: bad variant");
}

PhaseReport phase_report(const Trajectory& traj, const BlochLoop& loop, double consistency_tol) {
  PhaseReport report{};
  report.gamma_total = total_phase(traj);
  report.gamma_dynamic = dynamic_phase(traj);
  report.gamma_geometric = geometric_phase(traj);
  report.solid_angle = solid_angle(loop);
  const double mismatch =
      std::abs(wrap_angle(report.gamma_geometric - (-0.5 * report.solid_angle)));
  if (mismatch > consistency_tol)
    throw Error("phase_report: geometric phase and -solid_angle/2 disagree by " +
                std::to_string(mismatch));
  return report;
}

UnconventionalFit fit_unconventional(const std::vector<std::pair<double, double>>& dyn_geo) {
  if (dyn_geo.size() < 3) throw Error("fit_unconventional: need at least 3 points");
  double xmin = dyn_geo.front().second, xmax = xmin;
  for (const auto& [gd, gg] : dyn_geo) {
    xmin = std::min(xmin, gg);
    xmax = std::max(xmax, gg);
  }
  if (xmax - xmin < 1e-12)
    throw Error("fit_unconventional: degenerate sweep (all geometric phases equal)");

  const double n = static_cast<double>(dyn_geo.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [gd, gg] : dyn_geo) {
    sx += gg;
    sy += gd;
    sxx += gg * gg;
    sxy += gg * gd;
  }
  const double denom = n * sxx - sx * sx;
  const double eta = (n * sxy - sx * sy) / denom;
  const double alpha = (sy - eta * sx) / n;
  double max_res = 0;
  for (const auto& [gd, gg] : dyn_geo)
    max_res = std::max(max_res, std::abs(gd - (alpha + eta * gg)));
  return UnconventionalFit{alpha, eta, max_res};
}

}  // namespace gqc
