#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/event_model.hpp"
#include "qtrack/ising_model.hpp"

namespace qtrack {

struct RelaxedSolution {
  Eigen::VectorXd s;
  double residual_norm = 0.0;
  double threshold = 0.0;
  std::vector<std::uint8_t> active;  // active[i] = 1 iff s[i] > threshold
};

// Minimum-norm least-squares solution of A S = b through an SVD
// pseudo-inverse; singular values below n * 1e-12 (relative to the largest)
// are treated as zero. The activation cut comes from system.hp.threshold.
RelaxedSolution solve_least_squares(const IsingSystem& system);

// Strict cut: values equal to the threshold stay inactive.
std::vector<std::uint8_t> apply_threshold(const Eigen::VectorXd& s,
                                          double threshold);

// Mean over events of the midpoint of the widest gap between distinct
// relaxed values in [0, 1.2]. Events with fewer than two distinct values
// are skipped; all events degenerate is an error.
double calibrate_threshold(const std::vector<Event>& events,
                           const Hyperparams& hp);

}  // namespace qtrack
