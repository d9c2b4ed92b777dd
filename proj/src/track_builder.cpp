#include "qtrack/track_builder.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qtrack/errors.hpp"

namespace qtrack {

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<TrackCandidate> build_tracks(
    const DoubletGraph& graph, const std::vector<std::uint8_t>& active) {
  if (active.size() != graph.doublets.size())
    throw DataError("activation vector size does not match doublet count");

  std::vector<int> parent(graph.n_hits);
  std::iota(parent.begin(), parent.end(), 0);
  for (const Doublet& d : graph.doublets) {
    if (!active[d.id]) continue;
    int ra = find_root(parent, d.hit_a);
    int rb = find_root(parent, d.hit_b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  // Components keyed by root; only hits touched by an active doublet count.
  std::map<int, TrackCandidate> components;
  for (const Doublet& d : graph.doublets) {
    if (!active[d.id]) continue;
    TrackCandidate& c = components[find_root(parent, d.hit_a)];
    c.doublet_ids.push_back(d.id);
    c.hit_ids.push_back(d.hit_a);
    c.hit_ids.push_back(d.hit_b);
  }

  std::vector<TrackCandidate> tracks;
  tracks.reserve(components.size());
  for (auto& [root, c] : components) {
    std::sort(c.hit_ids.begin(), c.hit_ids.end());
    c.hit_ids.erase(std::unique(c.hit_ids.begin(), c.hit_ids.end()),
                    c.hit_ids.end());
    std::sort(c.hit_ids.begin(), c.hit_ids.end(), [&graph](int a, int b) {
      if (graph.hit_module[a] != graph.hit_module[b])
        return graph.hit_module[a] < graph.hit_module[b];
      return a < b;
    });
    std::sort(c.doublet_ids.begin(), c.doublet_ids.end());
    tracks.push_back(std::move(c));
  }
  // components is keyed by the root, which is the component's smallest hit
  // id, so map order already gives the required track ordering.
  return tracks;
}

}  // namespace qtrack
