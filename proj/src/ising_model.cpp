#include "qtrack/ising_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>

#include "qtrack/errors.hpp"
#include "qtrack/event_model.hpp"

namespace qtrack {

namespace {
constexpr int kDenseLimit = 4096;
constexpr int kBruteForceLimit = 20;
}  // namespace

void validate_hyperparams(const Hyperparams& hp) {
  if (!(hp.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (hp.lambda < 0) throw ConfigError("lambda must be >= 0");
  if (hp.alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (hp.beta < 0.0) throw ConfigError("beta must be >= 0");
  if (!std::isfinite(hp.gamma) || !std::isfinite(hp.delta) ||
      !std::isfinite(hp.threshold))
    throw ConfigError("gamma, delta, threshold must be finite");
}

std::vector<std::pair<int, int>> bifurcation_penalty(
    const std::vector<Doublet>& doublets) {
  std::map<int, std::vector<int>> by_start, by_end;
  for (const Doublet& d : doublets) {
    by_start[d.hit_a].push_back(d.id);
    by_end[d.hit_b].push_back(d.id);
  }
  std::vector<std::pair<int, int>> pairs;
  auto emit = [&pairs](const std::map<int, std::vector<int>>& groups) {
    for (const auto& [hit, ids] : groups)
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
          pairs.emplace_back(std::min(ids[a], ids[b]),
                             std::max(ids[a], ids[b]));
  };
  emit(by_start);
  emit(by_end);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

IsingSystem assemble(const DoubletGraph& graph, const Hyperparams& hp,
                     CouplingMode mode) {
  validate_hyperparams(hp);
  const int n = static_cast<int>(graph.doublets.size());

  IsingSystem sys;
  sys.n = n;
  sys.original_n = n;
  sys.padded = false;
  sys.n_hits = graph.n_hits;
  sys.mode = mode;
  sys.hp = hp;
  sys.diag = Eigen::VectorXd::Constant(n, hp.gamma + 4.0 * hp.delta + hp.beta);
  sys.offdiag_uniform = hp.beta;
  sys.b = Eigen::VectorXd::Constant(n, 2.0 * hp.delta + hp.beta * graph.n_hits);
  sys.h_const = 0.5 * hp.delta * n +
                0.5 * hp.beta * static_cast<double>(graph.n_hits) * graph.n_hits;

  std::map<std::pair<int, int>, double> acc;
  for (const TripletCoupling& c : graph.couplings) {
    double w = mode == CouplingMode::step ? static_cast<double>(c.step)
                                          : c.dp_weight;
    if (w == 0.0) continue;
    acc[{std::min(c.i, c.j), std::max(c.i, c.j)}] += -2.0 * w;
  }
  if (hp.alpha != 0.0)
    for (const auto& [i, j] : bifurcation_penalty(graph.doublets))
      acc[{i, j}] += hp.alpha;

  for (const auto& [key, value] : acc)
    if (value != 0.0) sys.offdiag.push_back({key.first, key.second, value});
  return sys;
}

namespace {

void check_state_dim(const IsingSystem& sys, const Eigen::VectorXd& state) {
  if (state.size() != sys.n)
    throw DataError("state dimension " + std::to_string(state.size()) +
                    " does not match system size " + std::to_string(sys.n));
}

}  // namespace

double evaluate_h(const IsingSystem& sys, const Eigen::VectorXd& state) {
  check_state_dim(sys, state);
  double quad = 0.5 * state.cwiseProduct(state).dot(sys.diag);
  for (const OffDiagEntry& e : sys.offdiag)
    quad += e.value * state[e.i] * state[e.j];
  if (sys.offdiag_uniform != 0.0) {
    double s = state.sum();
    quad += 0.5 * sys.offdiag_uniform * (s * s - state.squaredNorm());
  }
  return quad - sys.b.dot(state) + sys.h_const;
}

Eigen::VectorXd apply_system(const IsingSystem& sys, const Eigen::VectorXd& x) {
  check_state_dim(sys, x);
  Eigen::VectorXd y = sys.diag.cwiseProduct(x);
  for (const OffDiagEntry& e : sys.offdiag) {
    y[e.i] += e.value * x[e.j];
    y[e.j] += e.value * x[e.i];
  }
  if (sys.offdiag_uniform != 0.0)
    y += sys.offdiag_uniform * (Eigen::VectorXd::Constant(sys.n, x.sum()) - x);
  return y;
}

Eigen::VectorXd gradient_h(const IsingSystem& sys,
                           const Eigen::VectorXd& state) {
  return sys.b - apply_system(sys, state);
}

std::vector<std::uint8_t> brute_force_ground_state(const IsingSystem& sys) {
  if (sys.n > kBruteForceLimit)
    throw ConfigError("brute force limited to " +
                      std::to_string(kBruteForceLimit) + " doublets, got " +
                      std::to_string(sys.n));
  const int n = sys.n;
  if (n == 0) return {};

  Eigen::MatrixXd a = dense_matrix(sys);
  const std::uint32_t n_states = 1u << n;

  // H over subsets, built incrementally: adding doublet k to subset s costs
  // 1/2 A[k][k] - b[k] + sum_{j in s} A[k][j].
  std::vector<double> energy(n_states);
  energy[0] = sys.h_const;
  for (std::uint32_t mask = 1; mask < n_states; ++mask) {
    const int k = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double delta = 0.5 * a(k, k) - sys.b[k];
    for (std::uint32_t bits = rest; bits; bits &= bits - 1)
      delta += a(k, std::countr_zero(bits));
    energy[mask] = energy[rest] + delta;
  }

  // Prefer the state with fewer active doublets on exact energy ties, then
  // the lexicographically smallest activation sequence s_0, s_1, ...
  std::uint32_t best = 0;
  for (std::uint32_t mask = 1; mask < n_states; ++mask) {
    if (energy[mask] < energy[best]) {
      best = mask;
    } else if (energy[mask] == energy[best]) {
      const int pc_mask = std::popcount(mask);
      const int pc_best = std::popcount(best);
      if (pc_mask < pc_best) {
        best = mask;
      } else if (pc_mask == pc_best && mask != best) {
        const int first_diff = std::countr_zero(mask ^ best);
        if (!(mask & (1u << first_diff))) best = mask;
      }
    }
  }

  std::vector<std::uint8_t> state(n);
  for (int i = 0; i < n; ++i) state[i] = (best >> i) & 1u;
  return state;
}

int next_pow2(int n) {
  if (n < 0) throw ConfigError("next_pow2: negative size");
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

IsingSystem pad_system(const IsingSystem& sys) {
  if (sys.n == 0) throw ConfigError("cannot pad an empty system");
  IsingSystem out = sys;
  out.original_n = sys.padded ? sys.original_n : sys.n;
  out.padded = true;

  const int n_pad = next_pow2(sys.n);
  if (n_pad == sys.n) return out;

  // The uniform occupancy coupling must not leak into the padding block;
  // materialize it inside the original block instead.
  if (out.offdiag_uniform != 0.0) {
    std::map<std::pair<int, int>, double> acc;
    for (const OffDiagEntry& e : out.offdiag) acc[{e.i, e.j}] = e.value;
    for (int i = 0; i < sys.n; ++i)
      for (int j = i + 1; j < sys.n; ++j) acc[{i, j}] += out.offdiag_uniform;
    out.offdiag.clear();
    for (const auto& [key, value] : acc)
      if (value != 0.0) out.offdiag.push_back({key.first, key.second, value});
    out.offdiag_uniform = 0.0;
  }

  const double pad_diag = sys.hp.gamma + 4.0 * sys.hp.delta;
  const double pad_bias = 2.0 * sys.hp.delta;
  out.n = n_pad;
  out.diag.conservativeResize(n_pad);
  out.b.conservativeResize(n_pad);
  for (int i = sys.n; i < n_pad; ++i) {
    out.diag[i] = pad_diag;
    out.b[i] = pad_bias;
  }
  out.h_const += 0.5 * sys.hp.delta * (n_pad - sys.n);
  return out;
}

Eigen::MatrixXd dense_matrix(const IsingSystem& sys) {
  if (sys.n > kDenseLimit)
    throw NumericError("refusing dense materialization beyond " +
                       std::to_string(kDenseLimit));
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Constant(sys.n, sys.n, sys.offdiag_uniform);
  for (int i = 0; i < sys.n; ++i) a(i, i) = sys.diag[i];
  for (const OffDiagEntry& e : sys.offdiag) {
    a(e.i, e.j) += e.value;
    a(e.j, e.i) += e.value;
  }
  return a;
}

SparsityStats sparsity_stats(const IsingSystem& sys) {
  SparsityStats stats;
  if (sys.n == 0) return stats;
  std::vector<int> row(sys.n, 0);
  for (int i = 0; i < sys.n; ++i)
    if (sys.diag[i] != 0.0) ++row[i];
  if (sys.offdiag_uniform == 0.0) {
    for (const OffDiagEntry& e : sys.offdiag) {
      if (e.value == 0.0) continue;
      ++row[e.i];
      ++row[e.j];
    }
  } else {
    for (int i = 0; i < sys.n; ++i) row[i] += sys.n - 1;
    for (const OffDiagEntry& e : sys.offdiag)
      if (e.value + sys.offdiag_uniform == 0.0) {
        --row[e.i];
        --row[e.j];
      }
  }
  for (int i = 0; i < sys.n; ++i) {
    stats.nnz += row[i];
    stats.max_row_nnz = std::max(stats.max_row_nnz, row[i]);
  }
  stats.density = static_cast<double>(stats.nnz) /
                  (static_cast<double>(sys.n) * sys.n);
  return stats;
}

void write_coordinate_dump(const IsingSystem& sys, std::ostream& out) {
  if (sys.offdiag_uniform != 0.0 && sys.n > kDenseLimit)
    throw NumericError("coordinate dump with occupancy coupling is dense; "
                       "system too large");

  // Upper triangle, row major. Off-diagonal values are mirrored implicitly.
  std::map<std::pair<int, int>, double> entries;
  for (int i = 0; i < sys.n; ++i)
    if (sys.diag[i] != 0.0) entries[{i, i}] = sys.diag[i];
  for (const OffDiagEntry& e : sys.offdiag) entries[{e.i, e.j}] += e.value;
  if (sys.offdiag_uniform != 0.0)
    for (int i = 0; i < sys.n; ++i)
      for (int j = i + 1; j < sys.n; ++j)
        entries[{i, j}] += sys.offdiag_uniform;
  std::erase_if(entries, [](const auto& kv) { return kv.second == 0.0; });

  out << sys.original_n << ' ' << sys.n << ' ' << entries.size() << '\n';
  for (const auto& [key, value] : entries)
    out << key.first << ' ' << key.second << ' ' << format_double(value)
        << '\n';
}

}  // namespace qtrack
