#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qtrack {

// Lengths are in millimetres throughout.

struct Hit {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int module = 0;                // detector layer index, increasing with z
  std::optional<int> truth_id;   // id of the generating particle, if known
};

struct TruthParticle {
  int id = 0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> direction{0.0, 0.0, 1.0};  // unit vector
  std::vector<int> hit_ids;
};

struct Event {
  std::vector<Hit> hits;
  std::vector<TruthParticle> particles;
  std::string geometry_id;
  // When ingestion had to remap hit ids to a dense 0..N-1 range, the
  // original id of hit i is kept here; empty means ids were already dense.
  std::vector<int> original_hit_ids;

  std::size_t n_hits() const { return hits.size(); }
};

enum class EventFormat { json, csv };

// Throws DataError when ids collide, module/z assignments are inconsistent,
// particle references dangle, or a direction is not unit length.
void validate_event(const Event& event);

// Remaps hit ids to dense 0..N-1 (keeping the originals) when needed and
// validates the result.
void finalize_event(Event& event);

Event read_event(const std::filesystem::path& path, EventFormat format);
void write_event(const Event& event, const std::filesystem::path& path,
                 EventFormat format);

std::string event_to_json(const Event& event);
Event event_from_json(const std::string& text);

// CSV keeps hits only (header id,x,y,z,module,truth_id); particles are lost.
std::string event_to_csv(const Event& event);
Event event_from_csv(const std::string& text);

// Decimal formatting used by every text writer; round-trips doubles exactly.
std::string format_double(double value);

}  // namespace qtrack
