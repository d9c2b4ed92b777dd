#pragma once

#include <cstdint>
#include <vector>

#include "qtrack/event_model.hpp"

namespace qtrack {

// Telescope of equally spaced planes parallel to the xy plane. Particles
// leave the origin on straight lines aimed at a uniformly sampled point on
// the last plane, so every generated hit lies inside the active rectangle.

struct ToyConfig {
  int n_layers = 3;
  int n_particles = 5;
  double layer_spacing = 30.0;    // mm, first plane sits at z = layer_spacing
  double half_aperture_x = 50.0;  // mm
  double half_aperture_y = 50.0;  // mm
  double smear_sigma = 0.0;       // mm, transverse Gaussian smearing
  double hit_efficiency = 1.0;    // keep probability per hit
  std::uint64_t rng_seed = 0;
};

struct DetectorGeometry {
  std::vector<double> layer_z;  // strictly increasing
  double half_aperture_x = 50.0;
  double half_aperture_y = 50.0;
};

void validate_toy_config(const ToyConfig& cfg);
DetectorGeometry make_geometry(const ToyConfig& cfg);

Event generate_event(const ToyConfig& cfg);

// Event i is generated with seed cfg.rng_seed + i, so any prefix of a batch
// is reproducible independently of the batch length.
std::vector<Event> generate_batch(const ToyConfig& cfg, int n_events);

}  // namespace qtrack
