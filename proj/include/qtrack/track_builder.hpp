#pragma once

#include <cstdint>
#include <vector>

#include "qtrack/doublet_graph.hpp"

namespace qtrack {

struct TrackCandidate {
  std::vector<int> hit_ids;      // sorted by (module, hit id)
  std::vector<int> doublet_ids;  // ascending
};

// Connected components of the hit graph induced by active doublets.
// Candidates are ordered by their smallest hit id.
std::vector<TrackCandidate> build_tracks(const DoubletGraph& graph,
                                         const std::vector<std::uint8_t>& active);

}  // namespace qtrack
