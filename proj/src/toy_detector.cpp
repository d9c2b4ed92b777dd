#include "qtrack/toy_detector.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "qtrack/errors.hpp"

namespace qtrack {

void validate_toy_config(const ToyConfig& cfg) {
  if (cfg.n_layers < 1) throw ConfigError("toy: n_layers must be >= 1");
  if (cfg.n_particles < 0) throw ConfigError("toy: n_particles must be >= 0");
  if (!(cfg.layer_spacing > 0.0))
    throw ConfigError("toy: layer_spacing must be > 0");
  if (!(cfg.half_aperture_x > 0.0) || !(cfg.half_aperture_y > 0.0))
    throw ConfigError("toy: apertures must be > 0");
  if (cfg.smear_sigma < 0.0) throw ConfigError("toy: smear_sigma must be >= 0");
  if (cfg.hit_efficiency < 0.0 || cfg.hit_efficiency > 1.0)
    throw ConfigError("toy: hit_efficiency must be in [0,1]");
}

DetectorGeometry make_geometry(const ToyConfig& cfg) {
  validate_toy_config(cfg);
  DetectorGeometry geo;
  geo.half_aperture_x = cfg.half_aperture_x;
  geo.half_aperture_y = cfg.half_aperture_y;
  geo.layer_z.reserve(cfg.n_layers);
  for (int l = 0; l < cfg.n_layers; ++l)
    geo.layer_z.push_back(cfg.layer_spacing * (l + 1));
  return geo;
}

namespace {

double uniform01(std::mt19937_64& eng) {
  // 53 random bits -> [0,1); keeps the draw sequence platform independent.
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::string geometry_tag(const ToyConfig& cfg) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "toy:L%d:s%g:a%gx%g", cfg.n_layers,
                cfg.layer_spacing, cfg.half_aperture_x, cfg.half_aperture_y);
  return buf;
}

}  // namespace

Event generate_event(const ToyConfig& cfg) {
  validate_toy_config(cfg);
  DetectorGeometry geo = make_geometry(cfg);
  const double z_last = geo.layer_z.back();

  Event event;
  event.geometry_id = geometry_tag(cfg);

  std::mt19937_64 eng(cfg.rng_seed);
  int next_hit_id = 0;
  for (int p = 0; p < cfg.n_particles; ++p) {
    // Aim at a uniform point on the last plane; this keeps every layer
    // crossing inside the aperture for straight lines from the origin.
    const double tx = (2.0 * uniform01(eng) - 1.0) * geo.half_aperture_x;
    const double ty = (2.0 * uniform01(eng) - 1.0) * geo.half_aperture_y;
    const double norm = std::sqrt(tx * tx + ty * ty + z_last * z_last);

    TruthParticle particle;
    particle.id = p;
    particle.origin = {0.0, 0.0, 0.0};
    particle.direction = {tx / norm, ty / norm, z_last / norm};

    for (int l = 0; l < cfg.n_layers; ++l) {
      const double zl = geo.layer_z[l];
      // Fixed draw order per hit slot: one keep uniform, then two smearing
      // normals only when smearing is on. Dropping a hit must not shift the
      // stream for later hits.
      const double u_keep = uniform01(eng);
      double dx = 0.0, dy = 0.0;
      if (cfg.smear_sigma > 0.0) {
        const double u1 = uniform01(eng);
        const double u2 = uniform01(eng);
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        dx = cfg.smear_sigma * r * std::cos(2.0 * M_PI * u2);
        dy = cfg.smear_sigma * r * std::sin(2.0 * M_PI * u2);
      }
      if (u_keep >= cfg.hit_efficiency) continue;

      const double s = zl / particle.direction[2];
      Hit hit;
      hit.id = next_hit_id++;
      hit.x = particle.direction[0] * s + dx;
      hit.y = particle.direction[1] * s + dy;
      hit.z = zl;
      hit.module = l;
      hit.truth_id = p;
      particle.hit_ids.push_back(hit.id);
      event.hits.push_back(hit);
    }
    event.particles.push_back(std::move(particle));
  }
  return event;
}

std::vector<Event> generate_batch(const ToyConfig& cfg, int n_events) {
  validate_toy_config(cfg);
  if (n_events < 0) throw ConfigError("toy: n_events must be >= 0");
  std::vector<Event> events;
  events.reserve(n_events);
  for (int i = 0; i < n_events; ++i) {
    ToyConfig c = cfg;
    c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(i);
    events.push_back(generate_event(c));
  }
  return events;
}

}  // namespace qtrack
