#include "qtrack/pipeline.hpp"

namespace qtrack {

PipelineResult reconstruct_event(const Event& event, const Hyperparams& hp,
                                 SolverMode solver, CouplingMode coupling,
                                 int max_skip) {
  PipelineResult out;
  out.graph = build_graph(event, hp.epsilon, hp.lambda, max_skip);
  out.system = assemble(out.graph, hp, coupling);

  if (solver == SolverMode::classical || out.system.n == 0) {
    out.solution = solve_least_squares(out.system);
  } else {
    IsingSystem padded = pad_system(out.system);
    out.plan = plan_registers(padded);
    out.hhl = solver == SolverMode::hhl_oracle
                  ? solve_spectral_oracle(padded, *out.plan)
                  : solve_full_circuit(padded, *out.plan);
    out.solution.s = out.hhl->s_quantum;
    out.solution.threshold = hp.threshold;
    out.solution.active = apply_threshold(out.solution.s, hp.threshold);
    out.solution.residual_norm =
        (apply_system(out.system, out.solution.s) - out.system.b).norm();
  }

  out.tracks = build_tracks(out.graph, out.solution.active);
  out.segments = segment_metrics(out.graph, out.solution.active, event);
  std::vector<TrackMatch> matches = match_tracks(out.tracks, event);
  std::vector<TruthParticle> accepted = acceptance_filter(event);
  out.report = compute_report(matches, accepted);
  return out;
}

}  // namespace qtrack
