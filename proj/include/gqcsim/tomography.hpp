#pragma once

// State and process tomography with noiseless simulated readout, Choi-matrix
// channel representations, and average-gate-fidelity metrics (six-axial-state
// mean, Haar closed form with Monte-Carlo cross-check, process-fidelity
// conversion).

#include "gqcsim/sequence.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gqc {

class TomographyError : public Error {
 public:
  TomographyError(const std::string& message, double distance);
  double distance() const { return distance_; }

 private:
  double distance_;
};

/// A quantum channel as a map on density operators.
using Channel = std::function<DensityOperator(const DensityOperator&)>;

Channel channel_from_unitary(const Operator& u);
Channel channel_from_program(const CompiledProgram& prog, const SpinSystem& sys,
                             const NoiseConfig& noise);

/// Reduced single-spin channel of a two-spin program: the observed spin's
/// input is embedded next to a fixed spectator state, the program runs on the
/// pair, and the partner is traced out.
Channel reduced_channel(Spin observed, const CompiledProgram& prog, const SpinSystem& sys,
                        const NoiseConfig& noise, const StateVector& spectator);

/// Reconstruction from simulated expectation values of the complete
/// Pauli-product observable set; exact on noiseless readout. If the
/// reconstruction needs a positivity projection beyond 1e-8 the error
/// reports the projection distance.
DensityOperator state_tomography(const DensityOperator& rho_true);

/// Choi matrix J = sum_{mn} |m><n| (x) E(|m><n|), trace d, assembled by
/// applying the channel to a spanning set of states (no tomography step).
Mat choi_of_channel(const Channel& channel, int dim);

struct ProcessTomographyResult {
  Mat choi;                              // d^2 x d^2, trace d
  std::vector<std::string> input_labels; // the product states used
};

/// Choi reconstruction from the product inputs |psi_k>|psi_l> with
/// psi in {|0>, |1>, |+>, |+i>} per qubit (16 inputs for two qubits),
/// each channel output itself reconstructed by state_tomography.
/// Validates Choi positivity (>= -1e-8) and trace preservation.
ProcessTomographyResult process_tomography(const Channel& channel, int dim = 4);

/// F_pro = <v| J_E |v> / d^2 with |v> = sum_m |m> (x) U|m>.
double process_fidelity(const Mat& choi, const Operator& ideal);

/// Average gate fidelity of a unitary V against ideal U:
/// (d + |Tr(U^dag V)|^2) / (d (d + 1)).
double haar_average_fidelity_unitary(const Operator& ideal, const Operator& actual);

/// Monte-Carlo Haar average of <psi|U^dag E(|psi><psi|) U|psi>.
double haar_average_fidelity_mc(const Operator& ideal, const Channel& actual, int samples,
                                std::uint64_t seed);

/// The six axial Bloch states |0>, |1>, |+>, |->, |+i>, |-i> with labels.
const std::vector<std::pair<std::string, StateVector>>& six_axial_states();

struct FidelityReport {
  double six_state = 0;  // mean over the six axial states (dim 2)
  double haar = 0;       // Haar average via (d*F_pro + 1)/(d + 1)
  double process = 0;    // same conversion, F_pro from tomographic reconstruction
  std::vector<std::pair<std::string, double>> per_state;
};

/// Fidelity metrics of a channel against an ideal unitary. For two-qubit
/// channels the axial-state average is not defined and six_state mirrors
/// haar with per_state left empty.
FidelityReport average_gate_fidelity(const Operator& ideal, const Channel& actual);

}  // namespace gqc
