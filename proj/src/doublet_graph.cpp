#include "qtrack/doublet_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qtrack/errors.hpp"

namespace qtrack {

std::vector<Doublet> build_doublets(const Event& event, int max_skip) {
  if (max_skip < 0) throw ConfigError("build_doublets: max_skip must be >= 0");
  validate_event(event);

  // Hits per module, ids ascending inside a module for a stable ordering.
  std::map<int, std::vector<const Hit*>> layers;
  for (const Hit& h : event.hits) layers[h.module].push_back(&h);
  for (auto& [mod, hits] : layers)
    std::sort(hits.begin(), hits.end(),
              [](const Hit* a, const Hit* b) { return a->id < b->id; });

  std::vector<int> modules;
  modules.reserve(layers.size());
  for (const auto& [mod, hits] : layers) modules.push_back(mod);

  std::vector<Doublet> doublets;
  for (std::size_t m = 0; m < modules.size(); ++m) {
    for (std::size_t g = 1; g <= static_cast<std::size_t>(max_skip) + 1; ++g) {
      if (m + g >= modules.size()) break;
      for (const Hit* a : layers[modules[m]])
        for (const Hit* b : layers[modules[m + g]]) {
          Doublet d;
          d.id = static_cast<int>(doublets.size());
          d.hit_a = a->id;
          d.hit_b = b->id;
          d.seg = {b->x - a->x, b->y - a->y, b->z - a->z};
          d.length = std::sqrt(d.seg[0] * d.seg[0] + d.seg[1] * d.seg[1] +
                               d.seg[2] * d.seg[2]);
          doublets.push_back(d);
        }
    }
  }
  return doublets;
}

int angular_step(double cos_theta, double epsilon) {
  if (!(epsilon >= 0.0))
    throw ConfigError("angular_step: epsilon must be >= 0");
  if (std::abs(cos_theta) > 1.0 + 1e-9)
    throw NumericError("angular_step: cos_theta outside [-1,1]");
  cos_theta = std::clamp(cos_theta, -1.0, 1.0);
  return cos_theta >= 1.0 - epsilon ? 1 : 0;
}

double dp_angular_weight(double cos_theta, double len_i, double len_j,
                         int lambda) {
  if (lambda < 0) throw ConfigError("dp_angular_weight: lambda must be >= 0");
  if (!(len_i > 0.0) || !(len_j > 0.0))
    throw NumericError("dp_angular_weight: segment lengths must be > 0");
  if (std::abs(cos_theta) > 1.0 + 1e-9)
    throw NumericError("dp_angular_weight: cos_theta outside [-1,1]");
  cos_theta = std::clamp(cos_theta, -1.0, 1.0);
  return std::pow(cos_theta, lambda) / (len_i + len_j);
}

std::vector<TripletCoupling> build_couplings(
    const std::vector<Doublet>& doublets, double epsilon, int lambda) {
  if (!(epsilon >= 0.0))
    throw ConfigError("build_couplings: epsilon must be >= 0");
  if (lambda < 0) throw ConfigError("build_couplings: lambda must be >= 0");
  for (std::size_t k = 0; k < doublets.size(); ++k)
    if (doublets[k].id != static_cast<int>(k))
      throw DataError("build_couplings: doublet ids must match positions");

  // Middle hit -> incoming (ends there) and outgoing (starts there) doublets.
  std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_hit;
  for (const Doublet& d : doublets) {
    by_hit[d.hit_b].first.push_back(d.id);
    by_hit[d.hit_a].second.push_back(d.id);
  }

  std::vector<TripletCoupling> couplings;
  for (const auto& [hit, inout] : by_hit) {
    for (int i : inout.first)
      for (int j : inout.second) {
        const Doublet& di = doublets[i];
        const Doublet& dj = doublets[j];
        double dot = di.seg[0] * dj.seg[0] + di.seg[1] * dj.seg[1] +
                     di.seg[2] * dj.seg[2];
        double cos_theta =
            std::clamp(dot / (di.length * dj.length), -1.0, 1.0);
        TripletCoupling c;
        c.i = i;
        c.j = j;
        c.cos_theta = cos_theta;
        c.step = angular_step(cos_theta, epsilon);
        c.dp_weight = dp_angular_weight(cos_theta, di.length, dj.length, lambda);
        couplings.push_back(c);
      }
  }
  return couplings;
}

DoubletGraph build_graph(const Event& event, double epsilon, int lambda,
                         int max_skip) {
  DoubletGraph graph;
  graph.doublets = build_doublets(event, max_skip);
  graph.couplings = build_couplings(graph.doublets, epsilon, lambda);
  graph.n_hits = static_cast<int>(event.hits.size());
  graph.hit_module.resize(event.hits.size());
  for (const Hit& h : event.hits) graph.hit_module[h.id] = h.module;
  graph.epsilon = epsilon;
  graph.lambda = lambda;
  return graph;
}

}  // namespace qtrack
