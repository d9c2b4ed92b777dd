#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/ising_model.hpp"
#include "qtrack/toy_detector.hpp"

namespace testutil {

inline qtrack::ToyConfig toy(int layers, int particles, std::uint64_t seed = 0) {
  qtrack::ToyConfig cfg;
  cfg.n_layers = layers;
  cfg.n_particles = particles;
  cfg.rng_seed = seed;
  return cfg;
}

inline qtrack::Event toy_event(int layers, int particles,
                               std::uint64_t seed = 0) {
  return qtrack::generate_event(toy(layers, particles, seed));
}

// Event with one hit per module at the given (x, y) positions; z = 10*(m+1).
inline qtrack::Event line_event(const std::vector<std::pair<double, double>>& xy,
                                std::optional<int> truth = std::nullopt) {
  qtrack::Event event;
  for (std::size_t m = 0; m < xy.size(); ++m) {
    qtrack::Hit h;
    h.id = static_cast<int>(m);
    h.x = xy[m].first;
    h.y = xy[m].second;
    h.z = 10.0 * (m + 1);
    h.module = static_cast<int>(m);
    h.truth_id = truth;
    event.hits.push_back(h);
  }
  return event;
}

inline double urand(std::mt19937_64& eng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

// Energy evaluated straight from the term definitions, bypassing the
// assembled matrix. Used to cross-check assemble/evaluate_h.
inline double reference_energy(const qtrack::DoubletGraph& graph,
                               const qtrack::Hyperparams& hp,
                               qtrack::CouplingMode mode,
                               const Eigen::VectorXd& s) {
  double h = 0.0;
  for (const qtrack::TripletCoupling& c : graph.couplings) {
    double w = mode == qtrack::CouplingMode::step ? static_cast<double>(c.step)
                                                  : c.dp_weight;
    h += -2.0 * w * s[c.i] * s[c.j];
  }
  if (hp.alpha != 0.0)
    for (const auto& [i, j] : qtrack::bifurcation_penalty(graph.doublets))
      h += hp.alpha * s[i] * s[j];
  if (hp.beta != 0.0) {
    double excess = s.sum() - graph.n_hits;
    h += 0.5 * hp.beta * excess * excess;
  }
  h += 0.5 * hp.gamma * s.squaredNorm();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double g = 1.0 - 2.0 * s[i];
    h += 0.5 * hp.delta * g * g;
  }
  return h;
}

}  // namespace testutil
