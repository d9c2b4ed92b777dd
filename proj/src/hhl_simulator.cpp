#include "qtrack/hhl_simulator.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <json.hpp>

#include "qtrack/classical_solver.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/event_model.hpp"

namespace qtrack {

namespace {

constexpr int kMaxQubits = 22;
constexpr double kTwoPi = 2.0 * M_PI;

using cd = std::complex<double>;

struct Eigensys {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

Eigensys decompose(const IsingSystem& sys) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_matrix(sys));
  if (es.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

void check_spectrum(const Eigen::VectorXd& values) {
  const double lo = values(0);
  const double hi = values(values.size() - 1);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  if (scale == 0.0) throw NumericError("matrix is zero; spectrum unusable");
  if (lo < -1e-12 * scale)
    throw NumericError("matrix has negative eigenvalues; Hamiltonian "
                       "encoding needs a positive spectrum");
  if (lo <= 1e-12 * scale)
    throw NumericError("matrix is singular within tolerance");
}

int int_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// Classical reference on the unpadded coordinates, unit normalized.
Eigen::VectorXd classical_direction(const IsingSystem& padded, int n) {
  RelaxedSolution sol = solve_least_squares(padded);
  Eigen::VectorXd ref = sol.s.head(n);
  double norm = ref.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(n);
  return ref / norm;
}

double fidelity_against_classical(const Eigen::VectorXd& s_quantum,
                                  const IsingSystem& padded) {
  Eigen::VectorXd ref = classical_direction(padded, s_quantum.size());
  double qn = s_quantum.norm();
  if (qn == 0.0 || ref.norm() == 0.0) return 0.0;
  return std::abs(s_quantum.dot(ref)) / qn;
}

}  // namespace

RegisterPlan plan_registers(const IsingSystem& padded,
                            std::optional<int> n_q_override) {
  if (!padded.padded || padded.n != next_pow2(padded.n))
    throw ConfigError("plan_registers requires a power-of-two padded system");

  Eigensys eig = decompose(padded);
  check_spectrum(eig.values);

  RegisterPlan plan;
  plan.n = padded.original_n;
  plan.n_pad = padded.n;
  plan.n_b = int_log2(padded.n);
  plan.lambda_min = eig.values(0);
  plan.lambda_max = eig.values(eig.values.size() - 1);
  plan.kappa = plan.lambda_max / plan.lambda_min;

  int n_q_kappa = static_cast<int>(
      std::ceil(std::log2(plan.kappa + 1.0) - 1e-12));
  plan.n_q = std::max(1 + plan.n_b, n_q_kappa);
  if (n_q_override) {
    if (*n_q_override < 1) throw ConfigError("n_q override must be >= 1");
    plan.n_q = *n_q_override;
  }
  plan.total_qubits = plan.n_b + plan.n_q + 1;

  const double m = static_cast<double>(1ull << plan.n_q);
  plan.t = kTwoPi * (1.0 - 1.0 / m) / (plan.lambda_max * (1.0 + 1e-9));
  plan.c_rot = kTwoPi / (plan.t * m);
  return plan;
}

PreparedB prepare_b_state(const IsingSystem& padded) {
  if (!padded.padded || padded.n != next_pow2(padded.n))
    throw ConfigError("prepare_b_state requires a power-of-two padded system");
  const double first = padded.b(0);
  if (!(first > 0.0))
    throw DataError("bias vector must be positive for state preparation");
  for (Eigen::Index i = 1; i < padded.b.size(); ++i)
    if (std::abs(padded.b(i) - first) > 1e-12 * std::abs(first))
      throw DataError("bias vector is not uniform; Hadamard state "
                      "preparation cannot encode it");
  PreparedB prep;
  prep.norm_constant = padded.b.norm();
  prep.amplitudes = Eigen::VectorXd::Constant(
      padded.n, 1.0 / std::sqrt(static_cast<double>(padded.n)));
  return prep;
}

HHLResult solve_spectral_oracle(const IsingSystem& padded,
                                const RegisterPlan& plan) {
  Eigensys eig = decompose(padded);
  check_spectrum(eig.values);
  PreparedB prep = prepare_b_state(padded);

  const double m = static_cast<double>(1ull << plan.n_q);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(padded.n);
  double succ = 0.0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const double cj = eig.vectors.col(j).dot(prep.amplitudes);
    if (std::abs(cj) < 1e-14) continue;
    const long bin = std::llround(eig.values(j) * plan.t * m / kTwoPi);
    if (bin == 0)
      throw NumericError("eigenvalue rounds to the zero phase bin; "
                         "phase register too small");
    const double lambda_bin = static_cast<double>(bin) * plan.c_rot;
    x += prep.norm_constant * (cj / lambda_bin) * eig.vectors.col(j);
    succ += cj * cj / (static_cast<double>(bin) * bin);
  }
  if (!(succ > 0.0))
    throw NumericError("post-selection succeeds with probability zero");

  HHLResult res;
  res.mode = HhlMode::spectral_oracle;
  res.s_quantum = x.head(plan.n);
  res.success_probability = succ;
  res.fidelity = fidelity_against_classical(res.s_quantum, padded);
  res.qpe_residual = 0.0;
  return res;
}

namespace {

void check_norm(const std::vector<cd>& psi, const char* stage) {
  double norm2 = 0.0;
  for (const cd& a : psi) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw NumericError(std::string("statevector norm drifted after ") + stage);
}

// In-place Hadamard on a single qubit.
void hadamard(std::vector<cd>& psi, int qubit) {
  const std::size_t bit = std::size_t{1} << qubit;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    if (idx & bit) continue;
    const cd a0 = psi[idx];
    const cd a1 = psi[idx | bit];
    psi[idx] = inv_sqrt2 * (a0 + a1);
    psi[idx | bit] = inv_sqrt2 * (a0 - a1);
  }
}

void hadamard_wall(std::vector<cd>& psi, int first, int count) {
  for (int q = 0; q < count; ++q) hadamard(psi, first + q);
}

// Applies an n_pad x n_pad unitary to the state register on every index
// whose control qubit is set. The state register sits in the low bits, so
// blocks are contiguous.
void controlled_state_unitary(std::vector<cd>& psi, int control,
                              const Eigen::MatrixXcd& u) {
  const std::size_t n_pad = static_cast<std::size_t>(u.rows());
  const std::size_t bit = std::size_t{1} << control;
  Eigen::VectorXcd block(n_pad);
  for (std::size_t base = 0; base < psi.size(); base += n_pad) {
    if (!(base & bit)) continue;
    for (std::size_t i = 0; i < n_pad; ++i) block(i) = psi[base + i];
    block = u * block;
    for (std::size_t i = 0; i < n_pad; ++i) psi[base + i] = block(i);
  }
}

// Radix-2 FFT with explicit sign; scaled by 1/sqrt(M) so it is unitary.
void fft_unitary(std::vector<cd>& a, int sign) {
  const std::size_t m = a.size();
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = sign * kTwoPi / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < m; i += len) {
      cd w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (cd& x : a) x *= scale;
}

// QFT (sign=+1) or inverse QFT (sign=-1) on the phase register, applied to
// every (ancilla, state) line. Phase values are strided by n_pad.
void qft_on_phase(std::vector<cd>& psi, int n_b, int n_q, int sign) {
  const std::size_t n_pad = std::size_t{1} << n_b;
  const std::size_t m = std::size_t{1} << n_q;
  std::vector<cd> line(m);
  const std::size_t n_anc_blocks = psi.size() / (m * n_pad);
  for (std::size_t anc = 0; anc < n_anc_blocks; ++anc)
    for (std::size_t b = 0; b < n_pad; ++b) {
      const std::size_t base = anc * m * n_pad + b;
      for (std::size_t q = 0; q < m; ++q) line[q] = psi[base + q * n_pad];
      fft_unitary(line, sign);
      for (std::size_t q = 0; q < m; ++q) psi[base + q * n_pad] = line[q];
    }
}

}  // namespace

HHLResult solve_full_circuit(const IsingSystem& padded,
                             const RegisterPlan& plan) {
  if (plan.total_qubits > kMaxQubits)
    throw NumericError("statevector simulation capped at " +
                       std::to_string(kMaxQubits) + " qubits, plan needs " +
                       std::to_string(plan.total_qubits));
  Eigensys eig = decompose(padded);
  check_spectrum(eig.values);
  PreparedB prep = prepare_b_state(padded);

  const int n_b = plan.n_b;
  const int n_q = plan.n_q;
  const std::size_t n_pad = std::size_t{1} << n_b;
  const std::size_t m = std::size_t{1} << n_q;
  const std::size_t size = std::size_t{1} << plan.total_qubits;
  const int anc_qubit = n_b + n_q;

  std::vector<cd> psi(size, cd(0.0));
  psi[0] = cd(1.0);

  // 1. Encode b as a uniform superposition over the state register.
  hadamard_wall(psi, 0, n_b);
  check_norm(psi, "state preparation");

  // 2. Phase estimation: Hadamards, then controlled e^{iAt 2^k}.
  hadamard_wall(psi, n_b, n_q);
  Eigen::MatrixXcd u_power(n_pad, n_pad);
  for (int k = 0; k < n_q; ++k) {
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(n_pad));
    const double factor = plan.t * static_cast<double>(1ull << k);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j)
      phases(j) = std::exp(cd(0.0, eig.values(j) * factor));
    u_power = eig.vectors.cast<cd>() * phases.asDiagonal() *
              eig.vectors.transpose().cast<cd>();
    controlled_state_unitary(psi, n_b + k, u_power);
  }
  check_norm(psi, "controlled evolution");

  // 3. Inverse QFT turns accumulated phases into binary eigenvalue bins.
  qft_on_phase(psi, n_b, n_q, -1);
  check_norm(psi, "inverse QFT");

  // 4. Ancilla rotation by 2 arcsin(c_rot / lambda_bin); the bin value m
  //    gives sin(theta) = 1/m exactly. Bin 0 is left untouched.
  for (std::size_t q = 1; q < m; ++q) {
    const double sin_t = 1.0 / static_cast<double>(q);
    const double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    for (std::size_t b = 0; b < n_pad; ++b) {
      const std::size_t i0 = q * n_pad + b;
      const std::size_t i1 = i0 | (std::size_t{1} << anc_qubit);
      const cd a0 = psi[i0];
      const cd a1 = psi[i1];
      psi[i0] = cos_t * a0 - sin_t * a1;
      psi[i1] = sin_t * a0 + cos_t * a1;
    }
  }
  check_norm(psi, "conditioned rotation");

  // 5. Uncompute phase estimation.
  qft_on_phase(psi, n_b, n_q, +1);
  for (int k = 0; k < n_q; ++k) {
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(n_pad));
    const double factor = plan.t * static_cast<double>(1ull << k);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j)
      phases(j) = std::exp(cd(0.0, -eig.values(j) * factor));
    u_power = eig.vectors.cast<cd>() * phases.asDiagonal() *
              eig.vectors.transpose().cast<cd>();
    controlled_state_unitary(psi, n_b + k, u_power);
  }
  hadamard_wall(psi, n_b, n_q);
  check_norm(psi, "uncompute");

  // 6. Post-select ancilla = 1 and read the solution off the q = 0 slice.
  const std::size_t anc_base = std::size_t{1} << anc_qubit;
  double succ = 0.0;
  double residual = 0.0;
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t b = 0; b < n_pad; ++b) {
      const double p = std::norm(psi[anc_base + q * n_pad + b]);
      succ += p;
      if (q != 0) residual += p;
    }
  if (succ < 1e-300)
    throw NumericError("post-selection succeeds with probability zero");

  Eigen::VectorXd s_full(static_cast<Eigen::Index>(n_pad));
  for (std::size_t b = 0; b < n_pad; ++b)
    s_full(static_cast<Eigen::Index>(b)) =
        prep.norm_constant * psi[anc_base + b].real() / plan.c_rot;

  HHLResult res;
  res.mode = HhlMode::full_circuit;
  res.s_quantum = s_full.head(plan.n);
  res.success_probability = succ;
  res.fidelity = fidelity_against_classical(res.s_quantum, padded);
  res.qpe_residual = residual;
  return res;
}

ResourceReport make_resource_report(const RegisterPlan& plan,
                                    const HHLResult* result) {
  ResourceReport report;
  report.n = plan.n;
  report.n_pad = plan.n_pad;
  report.n_b = plan.n_b;
  report.n_q = plan.n_q;
  report.total_qubits = plan.total_qubits;
  report.kappa = plan.kappa;
  report.t = plan.t;
  report.c_rot = plan.c_rot;
  if (result) {
    report.success_probability = result->success_probability;
    report.fidelity = result->fidelity;
  }
  return report;
}

std::string resource_report_json(const ResourceReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["n_pad"] = report.n_pad;
  j["n_b"] = report.n_b;
  j["n_q"] = report.n_q;
  j["total_qubits"] = report.total_qubits;
  j["kappa"] = report.kappa;
  j["t"] = report.t;
  j["c_rot"] = report.c_rot;
  j["success_probability"] = report.success_probability
                                 ? nlohmann::json(*report.success_probability)
                                 : nlohmann::json(nullptr);
  j["fidelity"] = report.fidelity ? nlohmann::json(*report.fidelity)
                                  : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

std::string resource_report_csv_header() {
  return "n,n_pad,n_b,n_q,total_qubits,kappa,success_probability,fidelity";
}

std::string resource_report_csv_row(const ResourceReport& report) {
  std::string row = std::to_string(report.n);
  row += ',' + std::to_string(report.n_pad);
  row += ',' + std::to_string(report.n_b);
  row += ',' + std::to_string(report.n_q);
  row += ',' + std::to_string(report.total_qubits);
  row += ',' + format_double(report.kappa);
  row += ',';
  if (report.success_probability)
    row += format_double(*report.success_probability);
  row += ',';
  if (report.fidelity) row += format_double(*report.fidelity);
  return row;
}

}  // namespace qtrack
