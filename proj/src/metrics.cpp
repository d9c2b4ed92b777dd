#include "qtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "qtrack/errors.hpp"

namespace qtrack {

namespace {

std::map<int, int> module_count_by_particle(const Event& event) {
  std::map<int, std::set<int>> modules;
  for (const Hit& h : event.hits)
    if (h.truth_id) modules[*h.truth_id].insert(h.module);
  std::map<int, int> counts;
  for (const auto& [pid, mods] : modules)
    counts[pid] = static_cast<int>(mods.size());
  return counts;
}

double particle_feature(const TruthParticle& p, BinFeature feature) {
  if (feature == BinFeature::polar_angle) {
    double dz = std::clamp(p.direction[2], -1.0, 1.0);
    return std::acos(dz);
  }
  return static_cast<double>(p.hit_ids.size());
}

}  // namespace

std::vector<TruthParticle> acceptance_filter(const Event& event,
                                             int min_layers) {
  if (min_layers < 1) throw ConfigError("acceptance needs min_layers >= 1");
  std::map<int, int> counts = module_count_by_particle(event);
  std::vector<TruthParticle> accepted;
  for (const TruthParticle& p : event.particles) {
    auto it = counts.find(p.id);
    if (it != counts.end() && it->second >= min_layers) accepted.push_back(p);
  }
  return accepted;
}

std::vector<TrackMatch> match_tracks(const std::vector<TrackCandidate>& tracks,
                                     const Event& event, double purity_cut,
                                     int min_layers) {
  if (!(purity_cut > 0.0) || purity_cut > 1.0)
    throw ConfigError("purity cut must be in (0,1]");

  std::unordered_map<int, std::optional<int>> truth_of;
  std::unordered_map<int, int> hits_of_particle;
  for (const Hit& h : event.hits) {
    truth_of[h.id] = h.truth_id;
    if (h.truth_id) ++hits_of_particle[*h.truth_id];
  }
  std::set<int> accepted_ids;
  for (const TruthParticle& p : acceptance_filter(event, min_layers))
    accepted_ids.insert(p.id);

  std::vector<TrackMatch> matches;
  std::set<int> claimed;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    TrackMatch match;
    match.track_index = static_cast<int>(t);

    std::map<int, int> votes;
    for (int hid : tracks[t].hit_ids) {
      auto it = truth_of.find(hid);
      if (it == truth_of.end())
        throw DataError("track references hit " + std::to_string(hid) +
                        " missing from the event");
      if (it->second) ++votes[*it->second];
    }
    // Majority truth label; ties go to the smaller particle id since the
    // map is ordered.
    int best_votes = 0;
    for (const auto& [pid, v] : votes)
      if (v > best_votes) {
        best_votes = v;
        match.particle_id = pid;
      }
    if (!tracks[t].hit_ids.empty() && match.particle_id) {
      match.purity =
          static_cast<double>(best_votes) / tracks[t].hit_ids.size();
      match.hit_efficiency = static_cast<double>(best_votes) /
                             hits_of_particle[*match.particle_id];
    }
    match.correct = match.particle_id && match.purity >= purity_cut &&
                    accepted_ids.count(*match.particle_id) > 0;
    if (match.correct) {
      if (claimed.count(*match.particle_id))
        match.clone = true;
      else
        claimed.insert(*match.particle_id);
    }
    matches.push_back(match);
  }
  return matches;
}

MetricsReport compute_report(const std::vector<TrackMatch>& matches,
                             const std::vector<TruthParticle>& accepted,
                             const std::optional<BinningSpec>& binning) {
  MetricsReport report;
  report.n_accepted = static_cast<int>(accepted.size());
  report.n_tracks = static_cast<int>(matches.size());

  double purity_sum = 0.0;
  double hit_eff_sum = 0.0;
  for (const TrackMatch& m : matches) {
    if (m.correct && !m.clone) {
      ++report.n_correct;
      purity_sum += m.purity;
      hit_eff_sum += m.hit_efficiency;
    } else if (m.correct && m.clone) {
      ++report.n_clones;
    }
  }
  report.n_fakes = report.n_tracks - report.n_correct;
  report.track_efficiency =
      report.n_accepted > 0
          ? static_cast<double>(report.n_correct) / report.n_accepted
          : 0.0;
  report.fake_rate = report.n_tracks > 0 ? static_cast<double>(report.n_fakes) /
                                               report.n_tracks
                                         : 0.0;
  report.mean_purity =
      report.n_correct > 0 ? purity_sum / report.n_correct : 0.0;
  report.mean_hit_efficiency =
      report.n_correct > 0 ? hit_eff_sum / report.n_correct : 0.0;

  if (binning) {
    if (binning->edges.size() < 2 ||
        !std::is_sorted(binning->edges.begin(), binning->edges.end()) ||
        std::adjacent_find(binning->edges.begin(), binning->edges.end()) !=
            binning->edges.end())
      throw ConfigError("bin edges must be strictly increasing, >= 2 values");

    const std::vector<double>& e = binning->edges;
    report.bins.resize(e.size() - 1);
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      report.bins[k].lo = e[k];
      report.bins[k].hi = e[k + 1];
    }
    auto bin_of = [&e](double value) -> int {
      if (value < e.front() || value > e.back()) return -1;
      for (std::size_t k = 1; k < e.size(); ++k)
        if (value < e[k] || k + 1 == e.size()) return static_cast<int>(k - 1);
      return -1;
    };

    std::map<int, double> feature_of;
    for (const TruthParticle& p : accepted) {
      double f = particle_feature(p, binning->feature);
      feature_of[p.id] = f;
      int k = bin_of(f);
      if (k >= 0) ++report.bins[k].n_accepted;
    }
    for (const TrackMatch& m : matches) {
      if (!(m.correct && !m.clone) || !m.particle_id) continue;
      auto it = feature_of.find(*m.particle_id);
      if (it == feature_of.end()) continue;
      int k = bin_of(it->second);
      if (k >= 0) ++report.bins[k].n_correct;
    }
    for (BinnedEfficiency& bin : report.bins)
      bin.efficiency = bin.n_accepted > 0
                           ? static_cast<double>(bin.n_correct) / bin.n_accepted
                           : 0.0;
  }
  return report;
}

SegmentMetrics segment_metrics(const DoubletGraph& graph,
                               const std::vector<std::uint8_t>& active,
                               const Event& event) {
  if (active.size() != graph.doublets.size())
    throw DataError("activation vector size does not match doublet count");
  std::unordered_map<int, std::optional<int>> truth_of;
  for (const Hit& h : event.hits) truth_of[h.id] = h.truth_id;

  SegmentMetrics seg;
  for (const Doublet& d : graph.doublets) {
    auto a = truth_of.find(d.hit_a);
    auto b = truth_of.find(d.hit_b);
    if (a == truth_of.end() || b == truth_of.end())
      throw DataError("doublet references a hit missing from the event");
    bool is_true = a->second && b->second && *a->second == *b->second;
    if (is_true) ++seg.n_true;
    if (active[d.id]) {
      ++seg.n_active;
      if (is_true) ++seg.n_active_true;
    }
  }
  seg.efficiency = seg.n_true > 0
                       ? static_cast<double>(seg.n_active_true) / seg.n_true
                       : 1.0;
  seg.purity = seg.n_active > 0
                   ? static_cast<double>(seg.n_active_true) / seg.n_active
                   : 1.0;
  return seg;
}

}  // namespace qtrack
