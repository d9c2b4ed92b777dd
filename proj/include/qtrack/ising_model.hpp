#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/doublet_graph.hpp"

namespace qtrack {

struct Hyperparams {
  double epsilon = 1e-5;    // angular step tolerance on cos(theta)
  int lambda = 1;           // smooth-weight exponent
  double alpha = 0.0;       // bifurcation penalty
  double beta = 0.0;        // occupancy penalty
  double gamma = 2.0;       // spectral (diagonal) shift
  double delta = 1.0;       // gap shift
  double threshold = 0.45;  // activation cut on relaxed values
};

void validate_hyperparams(const Hyperparams& hp);

enum class CouplingMode { step, dp_smooth };

struct OffDiagEntry {
  int i = 0;  // i < j
  int j = 0;
  double value = 0.0;
};

// Energy H(S) = 1/2 S^T A S - b^T S + h_const with
//   A[i][i] = gamma + 4 delta + beta
//   A[i][j] = -2 w_ij + alpha bif_ij + beta     (i != j)
//   b[i]    = 2 delta + beta n_hits
//   h_const = delta/2 n + beta/2 n_hits^2
// The uniform beta part of the off-diagonal is kept separate so sparse
// systems stay sparse; `offdiag` stores only the coupling/bifurcation part.
struct IsingSystem {
  int n = 0;
  int original_n = 0;  // size before padding
  bool padded = false;
  int n_hits = 0;
  CouplingMode mode = CouplingMode::step;
  Hyperparams hp;
  Eigen::VectorXd diag;
  std::vector<OffDiagEntry> offdiag;
  double offdiag_uniform = 0.0;
  Eigen::VectorXd b;
  double h_const = 0.0;
};

// Unordered doublet pairs sharing a start hit or an end hit, sorted.
std::vector<std::pair<int, int>> bifurcation_penalty(
    const std::vector<Doublet>& doublets);

IsingSystem assemble(const DoubletGraph& graph, const Hyperparams& hp,
                     CouplingMode mode);

double evaluate_h(const IsingSystem& system, const Eigen::VectorXd& state);

// Residual b - A S; zero exactly at the stationary point of H.
Eigen::VectorXd gradient_h(const IsingSystem& system,
                           const Eigen::VectorXd& state);

// Exact minimizer over binary states, n <= 20. Ties go to fewer active
// doublets, then to the lexicographically smallest bitstring.
std::vector<std::uint8_t> brute_force_ground_state(const IsingSystem& system);

int next_pow2(int n);

// Embeds the system in the next power-of-two dimension; padding variables
// get the bare diagonal shift gamma + 4 delta and bias 2 delta, decoupled
// from everything else.
IsingSystem pad_system(const IsingSystem& system);

Eigen::MatrixXd dense_matrix(const IsingSystem& system);
Eigen::VectorXd apply_system(const IsingSystem& system,
                             const Eigen::VectorXd& x);

struct SparsityStats {
  long long nnz = 0;
  int max_row_nnz = 0;
  double density = 0.0;
};
SparsityStats sparsity_stats(const IsingSystem& system);

// Header "original_n n nnz", then upper-triangle coordinate triples.
void write_coordinate_dump(const IsingSystem& system, std::ostream& out);

}  // namespace qtrack
