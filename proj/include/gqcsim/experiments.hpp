#pragma once

// End-to-end experiment runners: the two-spin interferometer phase sweep,
// the pseudo-pure preparation check, the gate synthesis suite, and
// machine-readable result emission.

#include "gqcsim/gates.hpp"
#include "gqcsim/phase.hpp"
#include "gqcsim/tomography.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gqc {

/// A simulated check came out wrong (CLI exit code 2).
class CheckError : public Error {
 public:
  using Error::Error;
};

/// theta grid: n * pi / denom for n in [n_start, n_end].
struct SweepGrid {
  int n_start = 0;
  int n_end = 9;
  int denom = 18;
};

struct ExperimentConfig {
  SpinSystem system = SpinSystem::chloroform();
  SweepGrid sweep;
  NoiseConfig noise;
  double epsilon = 1e-5;
  std::uint64_t seed = 0;
};

/// Parses a "key = value" config file ('#' comments). Keys: omega_a_mhz,
/// omega_b_mhz, j_hz, t2_a_s, t2_b_s, epsilon, seed, sweep.n_start,
/// sweep.n_end, sweep.denom, noise.pulse_amplitude_error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

enum class LoopKind { up, mirror };
const char* loop_kind_name(LoopKind kind);

struct SweepRecord {
  double theta;         // rad, polar angle of the loop turning point
  LoopKind variant;
  double phase_measured;   // rad, in (-pi, pi]
  double gamma_dynamic;    // rad
  double gamma_geometric;  // rad
};

// Canonical sequence transcriptions. The interferometer text leaves the
// turning angle as the symbol "theta"; the loop text is its single-spin
// active-branch equivalent with geodesic legs traced by hard pulses.
std::string prep_sequence_text();
std::string interferometer_sequence_text();
std::string loop_sequence_text();
std::string gate_u1_sequence_text();
std::string gate_u2_sequence_text();

/// One interferometer run: spin a prepared in |+>, spin b at the loop start
/// (|0> up, |1> mirror); the phase is read from the a-spin coherence, and the
/// dynamic/geometric split from the cyclic trajectory of the active branch.
SweepRecord run_interferometer(double theta, LoopKind variant, const ExperimentConfig& cfg);

struct Fig3Result {
  std::vector<SweepRecord> records;  // up then mirror, theta ascending
  UnconventionalFit fit;             // over the up-variant (gamma_d, gamma_g)
};

Fig3Result run_fig3_sweep(const ExperimentConfig& cfg);

struct PrepReport {
  double lambda;             // weight of the maximally mixed part
  double mu;                 // weight of |00><00|
  double off_form_residual;  // Frobenius distance to lambda*I/4 + mu*|00><00|
};

/// Fits rho to lambda*I/4 + mu*|00><00| and reports the distance.
PrepReport pseudo_pure_form(const DensityOperator& rho);

/// Runs the spatial-averaging preparation on the thermal state and checks
/// the effective-pure form (residual < 1e-8, mu > 0); throws CheckError on
/// failure.
PrepReport run_prep_check(const ExperimentConfig& cfg);

struct GateResult {
  FidelityReport fidelity;
  double duration;  // s, total delay time of the compiled program
};

struct GateSuiteReport {
  GateResult u1, u2, uc;
};

/// Compiles the three gate realizations, verifies the noiseless unitaries
/// against their ideals (throws CheckError on mismatch), and reports
/// fidelities under the configured noise.
GateSuiteReport run_gate_suite(const ExperimentConfig& cfg);

enum class OutputFormat { csv, json };

/// theta_rad, variant, phase_rad, gamma_d_rad, gamma_g_rad; floats with 12
/// significant digits; rows ordered by variant then theta ascending.
void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void emit_json(const std::vector<SweepRecord>& records, std::ostream& out);
void emit_records(const std::vector<SweepRecord>& records, const std::string& path,
                  OutputFormat format);
std::vector<SweepRecord> parse_records_json(const std::string& text);

}  // namespace gqc
