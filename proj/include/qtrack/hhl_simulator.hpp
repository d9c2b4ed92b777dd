#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "qtrack/ising_model.hpp"

namespace qtrack {

// Register layout: |ancilla> |phase (n_q qubits)> |state (n_b qubits)>,
// with the state register in the low bits of the statevector index.
struct RegisterPlan {
  int n = 0;      // unpadded system size
  int n_pad = 0;  // padded size, power of two
  int n_b = 0;    // log2(n_pad)
  int n_q = 0;    // phase register width
  int total_qubits = 0;
  double kappa = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double t = 0.0;      // Hamiltonian evolution time
  double c_rot = 0.0;  // eigenvalue-inversion rotation constant
};

// Sizes the registers from the padded system's spectrum:
//   n_q = max(1 + n_b, ceil(log2(kappa + 1)))
//   t   = 2 pi (1 - 2^-n_q) / (lambda_max (1 + 1e-9))
//   c_rot = 2 pi / (t 2^n_q)
// so the largest eigenvalue lands just below the top phase bin and the
// rotation constant equals the smallest representable eigenvalue.
RegisterPlan plan_registers(const IsingSystem& padded,
                            std::optional<int> n_q_override = {});

struct PreparedB {
  Eigen::VectorXd amplitudes;  // unit vector over the state register
  double norm_constant = 0.0;  // |b|, the rescale factor back to solution units
};

// Hadamard-wall preparation handles a uniform bias vector only.
PreparedB prepare_b_state(const IsingSystem& padded);

enum class HhlMode { spectral_oracle, full_circuit };

struct HHLResult {
  HhlMode mode = HhlMode::spectral_oracle;
  Eigen::VectorXd s_quantum;  // solution estimate on the unpadded coordinates
  double success_probability = 0.0;
  double fidelity = 0.0;
  // Probability mass post-selected on ancilla=1 that failed to uncompute
  // back to |0> in the phase register (zero in the oracle model).
  double qpe_residual = 0.0;
};

// Analytic shortcut: exact eigendecomposition with eigenvalues rounded to
// their phase bins. Models a circuit whose QPE is perfectly peaked.
HHLResult solve_spectral_oracle(const IsingSystem& padded,
                                const RegisterPlan& plan);

// Dense statevector simulation of the six-step circuit: state prep, QPE
// (Hadamards, controlled e^{iAt 2^k}, inverse QFT), conditioned rotation,
// QPE uncompute, post-selection on the ancilla. Capped at 22 qubits.
HHLResult solve_full_circuit(const IsingSystem& padded,
                             const RegisterPlan& plan);

struct ResourceReport {
  int n = 0;
  int n_pad = 0;
  int n_b = 0;
  int n_q = 0;
  int total_qubits = 0;
  double kappa = 0.0;
  double t = 0.0;
  double c_rot = 0.0;
  std::optional<double> success_probability;
  std::optional<double> fidelity;
};

ResourceReport make_resource_report(const RegisterPlan& plan,
                                    const HHLResult* result = nullptr);
std::string resource_report_json(const ResourceReport& report);
std::string resource_report_csv_header();
std::string resource_report_csv_row(const ResourceReport& report);

}  // namespace qtrack
