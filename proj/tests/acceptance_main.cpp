// Acceptance gate: one pass/fail line per top-level requirement, exit 0
// only when every one of them holds.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/classical_solver.hpp"
#include "qtrack/hhl_simulator.hpp"
#include "qtrack/ising_model.hpp"
#include "qtrack/metrics.hpp"
#include "qtrack/pipeline.hpp"
#include "qtrack/studies.hpp"
#include "qtrack/toy_detector.hpp"

using namespace qtrack;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Event toy_event(int layers, int particles, std::uint64_t seed) {
  ToyConfig cfg;
  cfg.n_layers = layers;
  cfg.n_particles = particles;
  cfg.rng_seed = seed;
  return generate_event(cfg);
}

IsingSystem toy_system(int layers, int particles, std::uint64_t seed,
                       const Hyperparams& hp,
                       CouplingMode mode = CouplingMode::step) {
  Event event = toy_event(layers, particles, seed);
  return assemble(build_graph(event, hp.epsilon, hp.lambda), hp, mode);
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

// 1. Doublet counts across the benchmark grid, built in under a second.
Outcome check_doublet_counts() {
  struct Row {
    int layers, particles;
    std::size_t doublets;
  };
  const Row rows[] = {{3, 2, 8},  {3, 3, 18}, {3, 4, 32}, {3, 5, 50},
                      {4, 2, 12}, {4, 3, 27}, {4, 4, 48}};
  Outcome out;
  auto start = Clock::now();
  for (const Row& r : rows) {
    std::size_t got = build_doublets(toy_event(r.layers, r.particles, 1)).size();
    if (got != r.doublets) {
      out.pass = false;
      out.detail += " (" + std::to_string(r.layers) + "," +
                    std::to_string(r.particles) + ")->" + std::to_string(got) +
                    " want " + std::to_string(r.doublets);
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    out.pass = false;
    out.detail += " too slow: " + std::to_string(elapsed) + "s";
  }
  if (out.pass)
    out.detail = "7 configurations in " + std::to_string(elapsed) + "s";
  return out;
}

// 2. Register plans reach the expected qubit totals.
Outcome check_qubit_totals() {
  struct Row {
    int layers, particles, total;
  };
  const Row rows[] = {{3, 2, 8},  {3, 3, 12}, {3, 4, 12}, {3, 5, 14},
                      {4, 2, 10}, {4, 3, 12}, {4, 4, 14}};
  Hyperparams hp;
  Outcome out;
  std::string got_list;
  for (const Row& r : rows) {
    RegisterPlan plan =
        plan_registers(pad_system(toy_system(r.layers, r.particles, 1, hp)));
    got_list += (got_list.empty() ? "" : ",") +
                std::to_string(plan.total_qubits);
    if (plan.total_qubits != r.total) out.pass = false;
  }
  out.detail = "totals " + got_list;
  return out;
}

// 3. Clean five-track events: perfect segment selection with the tight
// angular tolerance, and >= 0.90 mean purity with the default one.
Outcome check_segment_quality() {
  Outcome out;
  Hyperparams tight;
  tight.epsilon = 1e-9;
  int perfect = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Event event = toy_event(3, 5, seed);
    PipelineResult res = reconstruct_event(event, tight, SolverMode::classical);
    if (res.segments.efficiency == 1.0 && res.segments.purity == 1.0)
      ++perfect;
  }
  if (perfect != 100) {
    out.pass = false;
    out.detail = "only " + std::to_string(perfect) +
                 "/100 events perfect at epsilon 1e-9";
    return out;
  }

  Hyperparams loose;
  loose.epsilon = 1e-5;
  double purity_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Event event = toy_event(3, 5, seed);
    PipelineResult res = reconstruct_event(event, loose, SolverMode::classical);
    purity_sum += res.segments.purity;
  }
  double mean_purity = purity_sum / 100.0;
  out.pass = mean_purity >= 0.90;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "100/100 perfect at 1e-9, mean purity %.6f at 1e-5",
                mean_purity);
  out.detail = buf;
  return out;
}

// 4. Full circuit, spectral oracle and classical relaxation classify each
// doublet identically on the three-layer grid; fidelities high and close.
Outcome check_solver_agreement() {
  Outcome out;
  Hyperparams hp;
  double min_fid = 1.0;
  double max_gap = 0.0;
  double max_seconds = 0.0;
  for (int particles = 1; particles <= 5; ++particles) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto start = Clock::now();
      IsingSystem sys = toy_system(3, particles, seed, hp);
      IsingSystem padded = pad_system(sys);
      RegisterPlan plan = plan_registers(padded);
      HHLResult oracle = solve_spectral_oracle(padded, plan);
      HHLResult circuit = solve_full_circuit(padded, plan);
      RelaxedSolution classical = solve_least_squares(sys);

      auto oracle_active = apply_threshold(oracle.s_quantum, hp.threshold);
      auto circuit_active = apply_threshold(circuit.s_quantum, hp.threshold);
      if (oracle_active != classical.active ||
          circuit_active != classical.active) {
        out.pass = false;
        out.detail += " classification mismatch at (3," +
                      std::to_string(particles) + ") seed " +
                      std::to_string(seed);
      }
      min_fid = std::min({min_fid, oracle.fidelity, circuit.fidelity});
      max_gap = std::max(max_gap, std::abs(circuit.fidelity - oracle.fidelity));
      max_seconds = std::max(max_seconds, seconds_since(start));
    }
  }
  if (min_fid < 0.95) {
    out.pass = false;
    out.detail += " min fidelity " + std::to_string(min_fid);
  }
  if (max_gap > 1e-3) {
    out.pass = false;
    out.detail += " circuit/oracle fidelity gap " + std::to_string(max_gap);
  }
  if (max_seconds >= 60.0) {
    out.pass = false;
    out.detail += " slowest event " + std::to_string(max_seconds) + "s";
  }
  if (out.pass) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "min fidelity %.6f, max gap %.2e, slowest %.2fs", min_fid,
                  max_gap, max_seconds);
    out.detail = buf;
  }
  return out;
}

// 5. Thresholded relaxation equals the exact binary optimum on events
// without the three-layer energy tie (>= 4 layers keeps it unambiguous).
Outcome check_exact_agreement() {
  Outcome out;
  Hyperparams hp;
  hp.epsilon = 1e-9;
  int events = 0;
  int agree = 0;
  auto run_case = [&](int layers, int particles, std::uint64_t seed) {
    IsingSystem sys = toy_system(layers, particles, seed, hp);
    if (sys.n > 20) return;
    ++events;
    RelaxedSolution sol = solve_least_squares(sys);
    if (sol.active == brute_force_ground_state(sys)) ++agree;
  };
  for (int layers = 4; layers <= 9; ++layers)
    for (std::uint64_t seed = 0; seed < 5; ++seed) run_case(layers, 1, seed);
  for (std::uint64_t seed = 0; seed < 10; ++seed) run_case(4, 2, seed);
  for (std::uint64_t seed = 0; seed < 10; ++seed) run_case(5, 2, seed);
  out.pass = events >= 50 && agree == events;
  out.detail = std::to_string(agree) + "/" + std::to_string(events) +
               " events match the brute-force optimum";
  return out;
}

// 6. The analytic gradient equals the (negated) finite-difference slope of
// the energy for random systems, states and hyperparameters.
Outcome check_gradient() {
  Outcome out;
  std::mt19937_64 eng(2024);
  int checked = 0;
  double worst = 0.0;
  const double step = 1e-3;  // the energy is quadratic, so any step is exact
  while (checked < 1000) {
    Hyperparams hp;
    hp.epsilon = uniform(eng, 1e-6, 1e-2);
    hp.lambda = 1 + static_cast<int>(uniform(eng, 0.0, 4.0));
    hp.alpha = uniform(eng, 0.0, 1.0);
    hp.beta = uniform(eng, 0.0, 0.5);
    hp.gamma = uniform(eng, 0.5, 3.0);
    hp.delta = uniform(eng, 0.25, 2.0);
    int layers = 3 + static_cast<int>(uniform(eng, 0.0, 3.0));
    int particles = 1 + static_cast<int>(uniform(eng, 0.0, 3.0));
    CouplingMode mode = uniform(eng, 0.0, 1.0) < 0.5 ? CouplingMode::step
                                                     : CouplingMode::dp_smooth;
    IsingSystem sys = toy_system(layers, particles, eng(), hp, mode);
    if (sys.n == 0) continue;
    for (int rep = 0; rep < 5 && checked < 1000; ++rep, ++checked) {
      Eigen::VectorXd s(sys.n);
      for (int i = 0; i < sys.n; ++i) s[i] = uniform(eng, -1.0, 2.0);
      Eigen::VectorXd grad = gradient_h(sys, s);
      int i = static_cast<int>(uniform(eng, 0.0, static_cast<double>(sys.n)));
      i = std::min(i, sys.n - 1);
      Eigen::VectorXd up = s, dn = s;
      up[i] += step;
      dn[i] -= step;
      double fd = (evaluate_h(sys, up) - evaluate_h(sys, dn)) / (2.0 * step);
      double err = std::abs(grad[i] + fd) / std::max(1.0, std::abs(grad[i]));
      worst = std::max(worst, err);
    }
  }
  out.pass = worst <= 1e-6;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "1000 draws, worst relative error %.2e",
                worst);
  out.detail = buf;
  return out;
}

// 7. Condition numbers stay below five across the occupancy grid.
Outcome check_kappa_grid() {
  Outcome out;
  Hyperparams hp;
  std::vector<StudyRecord> records =
      run_kappa_study({2, 20}, {3, 10}, {0}, hp);
  double worst = 0.0;
  for (const StudyRecord& rec : records) {
    if (rec.singular || !(rec.kappa < 5.0)) {
      out.pass = false;
      out.detail += " (" + std::to_string(rec.particles) + "," +
                    std::to_string(rec.layers) + ") kappa " +
                    std::to_string(rec.kappa);
    }
    worst = std::max(worst, rec.kappa);
  }
  if (out.pass) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu grid points, max kappa %.4f",
                  records.size(), worst);
    out.detail = buf;
  }
  return out;
}

// 8. Calibrated activation threshold lands in the documented band.
Outcome check_calibration() {
  Outcome out;
  Hyperparams hp;
  ToyConfig cfg;
  cfg.n_layers = 3;
  cfg.n_particles = 5;
  cfg.rng_seed = 0;
  double threshold = calibrate_threshold(generate_batch(cfg, 100), hp);
  out.pass = threshold >= 0.38 && threshold <= 0.50;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "threshold %.10f in [0.38, 0.50]",
                threshold);
  out.detail = buf;
  return out;
}

// 9. Published long-track reference numbers are pinned as documented.
Outcome check_reference_constants() {
  Outcome out;
  out.pass =
      kReferenceTrackEfficiency == 0.97 && kReferenceFakeRate == 0.043;
  out.detail = "efficiency 0.97, fake rate 0.043";
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*check)();
  };
  const Entry entries[] = {
      {"doublet counts on the benchmark grid", check_doublet_counts},
      {"qubit totals for the register plans", check_qubit_totals},
      {"segment efficiency and purity on clean events", check_segment_quality},
      {"circuit / oracle / classical agreement", check_solver_agreement},
      {"relaxation matches the exact ground state", check_exact_agreement},
      {"gradient against finite differences", check_gradient},
      {"condition numbers below five on the grid", check_kappa_grid},
      {"threshold calibration inside the band", check_calibration},
      {"published reference constants", check_reference_constants},
  };

  int failures = 0;
  int index = 0;
  for (const Entry& entry : entries) {
    ++index;
    Outcome out;
    std::string detail;
    try {
      out = entry.check();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::printf("[%d/9] %s: %s%s%s\n", index, out.pass ? "PASS" : "FAIL",
                entry.name, out.detail.empty() ? "" : " - ",
                out.detail.c_str());
  }
  if (failures == 0) {
    std::printf("acceptance: all 9 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failing\n", failures);
  return 1;
}
