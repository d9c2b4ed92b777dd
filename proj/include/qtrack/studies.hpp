#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtrack/ising_model.hpp"
#include "qtrack/toy_detector.hpp"

namespace qtrack {

struct StudyRecord {
  int particles = 0;
  int layers = 0;
  std::uint64_t seed = 0;
  int n_doublets = 0;
  int n_pad = 0;
  long long nnz = 0;
  int max_row_nnz = 0;
  double density = 0.0;
  double kappa = 0.0;  // NaN when not computed, inf when singular
  bool singular = false;
};

struct SweepRange {
  int lo = 0;
  int hi = -1;  // inclusive; hi < lo means empty
};

// Extreme singular values (smallest, largest). Dense eigendecomposition up
// to dense_limit, Lanczos with full reorthogonalization on A^2 above it;
// dense_limit = 0 forces the iterative path.
std::pair<double, double> extreme_singular_values(const IsingSystem& system,
                                                  int dense_limit = 512);

std::vector<StudyRecord> run_sparsity_study(SweepRange particles,
                                            SweepRange layers,
                                            const std::vector<std::uint64_t>& seeds,
                                            const Hyperparams& hp);

std::vector<StudyRecord> run_kappa_study(SweepRange particles,
                                         SweepRange layers,
                                         const std::vector<std::uint64_t>& seeds,
                                         const Hyperparams& hp);

std::string study_csv(const std::vector<StudyRecord>& records);

}  // namespace qtrack
