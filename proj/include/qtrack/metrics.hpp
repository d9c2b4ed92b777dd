#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qtrack/doublet_graph.hpp"
#include "qtrack/event_model.hpp"
#include "qtrack/track_builder.hpp"

namespace qtrack {

// Published full-simulation reference point for long tracks (track finding
// efficiency and fake rate); used as context next to toy numbers, never as
// a pass threshold for them.
inline constexpr double kReferenceTrackEfficiency = 0.97;
inline constexpr double kReferenceFakeRate = 0.043;

struct TrackMatch {
  int track_index = 0;
  std::optional<int> particle_id;  // majority-truth particle
  double purity = 0.0;             // majority fraction of the track's hits
  double hit_efficiency = 0.0;     // matched hits / particle hits
  bool correct = false;            // purity >= cut and particle accepted
  bool clone = false;              // correct particle already claimed
};

struct BinnedEfficiency {
  double lo = 0.0;
  double hi = 0.0;
  int n_accepted = 0;
  int n_correct = 0;
  double efficiency = 0.0;
};

enum class BinFeature { polar_angle, hit_count };

struct BinningSpec {
  BinFeature feature = BinFeature::polar_angle;
  std::vector<double> edges;  // strictly increasing, at least two
};

struct MetricsReport {
  int n_accepted = 0;
  int n_tracks = 0;
  int n_correct = 0;  // correct excluding clones
  int n_clones = 0;
  int n_fakes = 0;  // includes clones
  double track_efficiency = 0.0;
  double fake_rate = 0.0;
  double mean_purity = 0.0;      // over correct matches
  double mean_hit_efficiency = 0.0;
  std::vector<BinnedEfficiency> bins;
};

// Particles crossing at least min_layers distinct modules.
std::vector<TruthParticle> acceptance_filter(const Event& event,
                                             int min_layers = 3);

// Majority-truth matching with an inclusive purity cut (>=). A correct
// match requires the majority particle to pass acceptance; repeats of an
// already-claimed particle are flagged as clones.
std::vector<TrackMatch> match_tracks(const std::vector<TrackCandidate>& tracks,
                                     const Event& event,
                                     double purity_cut = 0.7,
                                     int min_layers = 3);

MetricsReport compute_report(const std::vector<TrackMatch>& matches,
                             const std::vector<TruthParticle>& accepted,
                             const std::optional<BinningSpec>& binning = {});

struct SegmentMetrics {
  int n_true = 0;
  int n_active = 0;
  int n_active_true = 0;
  double efficiency = 1.0;  // active true / true, 1 when no true doublets
  double purity = 1.0;      // active true / active, 1 when nothing active
};

SegmentMetrics segment_metrics(const DoubletGraph& graph,
                               const std::vector<std::uint8_t>& active,
                               const Event& event);

}  // namespace qtrack
