#pragma once

#include <optional>

#include "qtrack/classical_solver.hpp"
#include "qtrack/hhl_simulator.hpp"
#include "qtrack/metrics.hpp"
#include "qtrack/track_builder.hpp"

namespace qtrack {

enum class SolverMode { classical, hhl_oracle, hhl_circuit };

struct PipelineResult {
  DoubletGraph graph;
  IsingSystem system;  // unpadded
  // s holds whichever relaxed values drove the classification (quantum
  // estimates in the hhl modes); residual_norm is measured on the unpadded
  // system either way.
  RelaxedSolution solution;
  std::optional<RegisterPlan> plan;
  std::optional<HHLResult> hhl;
  std::vector<TrackCandidate> tracks;
  SegmentMetrics segments;
  MetricsReport report;
};

PipelineResult reconstruct_event(const Event& event, const Hyperparams& hp,
                                 SolverMode solver,
                                 CouplingMode coupling = CouplingMode::step,
                                 int max_skip = 0);

}  // namespace qtrack
