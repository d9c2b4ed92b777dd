#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qtrack/errors.hpp"
#include "qtrack/run_config.hpp"

using namespace qtrack;

TEST_CASE("defaults are a valid configuration") {
  RunConfig cfg;
  CHECK_NOTHROW(validate_run_config(cfg));
  CHECK(cfg.hp.epsilon == 1e-5);
  CHECK(cfg.hp.lambda == 1);
  CHECK(cfg.hp.gamma == 2.0);
  CHECK(cfg.hp.delta == 1.0);
  CHECK(cfg.hp.threshold == 0.45);
  CHECK(cfg.toy.n_layers == 3);
  CHECK(cfg.toy.n_particles == 5);
  CHECK(cfg.toy.layer_spacing == 30.0);
  CHECK(cfg.toy.half_aperture_x == 50.0);
  CHECK(cfg.toy.smear_sigma == 0.0);
  CHECK(cfg.toy.hit_efficiency == 1.0);
  CHECK(cfg.events == 1);
  CHECK(cfg.mode == "classical");
  CHECK(cfg.coupling == "step");
  CHECK(cfg.format == "json");
  CHECK(cfg.max_skip == 0);
}

TEST_CASE("every documented key overrides its default") {
  nlohmann::json full = {
      {"epsilon", 1e-3},       {"lambda", 4},
      {"alpha", 0.5},          {"beta", 0.25},
      {"gamma", 3.0},          {"delta", 1.5},
      {"threshold", 0.6},      {"layers", 7},
      {"particles", 9},        {"layer_spacing", 12.5},
      {"half_aperture_x", 40.0}, {"half_aperture_y", 45.0},
      {"smear_sigma", 0.2},    {"hit_efficiency", 0.9},
      {"seed", 42},            {"events", 11},
      {"mode", "hhl-oracle"},  {"coupling", "dp"},
      {"format", "csv"},       {"max_skip", 2},
      {"input", "in.json"},    {"output", "outdir"},
      {"min_particles", 3},    {"max_particles", 6},
      {"min_layers", 4},       {"max_layers", 8},
      {"study_seeds", 5},
  };
  // The fixture covers exactly the documented key list.
  for (const std::string& key : config_keys()) CHECK(full.contains(key));
  CHECK(full.size() == config_keys().size());

  RunConfig cfg;
  merge_config_json(cfg, full.dump());
  CHECK(cfg.hp.epsilon == 1e-3);
  CHECK(cfg.hp.lambda == 4);
  CHECK(cfg.hp.alpha == 0.5);
  CHECK(cfg.hp.beta == 0.25);
  CHECK(cfg.hp.gamma == 3.0);
  CHECK(cfg.hp.delta == 1.5);
  CHECK(cfg.hp.threshold == 0.6);
  CHECK(cfg.toy.n_layers == 7);
  CHECK(cfg.toy.n_particles == 9);
  CHECK(cfg.toy.layer_spacing == 12.5);
  CHECK(cfg.toy.half_aperture_x == 40.0);
  CHECK(cfg.toy.half_aperture_y == 45.0);
  CHECK(cfg.toy.smear_sigma == 0.2);
  CHECK(cfg.toy.hit_efficiency == 0.9);
  CHECK(cfg.toy.rng_seed == 42);
  CHECK(cfg.events == 11);
  CHECK(cfg.mode == "hhl-oracle");
  CHECK(cfg.coupling == "dp");
  CHECK(cfg.format == "csv");
  CHECK(cfg.max_skip == 2);
  CHECK(cfg.input == "in.json");
  CHECK(cfg.output == "outdir");
  CHECK(cfg.min_particles == 3);
  CHECK(cfg.max_particles == 6);
  CHECK(cfg.min_layers == 4);
  CHECK(cfg.max_layers == 8);
  CHECK(cfg.study_seeds == 5);
  CHECK_NOTHROW(validate_run_config(cfg));
}

TEST_CASE("partial configs leave the rest untouched") {
  RunConfig cfg;
  merge_config_json(cfg, R"({"threshold": 0.9})");
  CHECK(cfg.hp.threshold == 0.9);
  CHECK(cfg.hp.gamma == 2.0);
  CHECK(cfg.mode == "classical");
}

TEST_CASE("unknown keys and wrong types are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(merge_config_json(cfg, R"({"treshold": 0.5})"), ConfigError);
  CHECK_THROWS_AS(merge_config_json(cfg, R"({"gamma": "high"})"), ConfigError);
  CHECK_THROWS_AS(merge_config_json(cfg, R"({"mode": 3})"), ConfigError);
  CHECK_THROWS_AS(merge_config_json(cfg, "[1,2]"), ConfigError);
  CHECK_THROWS_AS(merge_config_json(cfg, "{broken"), ConfigError);
}

TEST_CASE("config files load and layer on a base") {
  const std::string path = "test_run_config_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"particles": 2, "mode": "hhl-circuit"})";
  }
  RunConfig base;
  base.toy.n_layers = 4;
  RunConfig merged = load_config_file(path, base);
  CHECK(merged.toy.n_particles == 2);
  CHECK(merged.toy.n_layers == 4);  // carried over from the base
  CHECK(merged.mode == "hhl-circuit");
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config_file("no_such_config.json", RunConfig{}),
                  ConfigError);
}

TEST_CASE("validation catches bad enumerations and counts") {
  RunConfig cfg;
  cfg.mode = "quantum";
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.coupling = "smooth";
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.format = "xml";
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.events = -1;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.max_skip = -1;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.study_seeds = 0;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = {};
  cfg.toy.hit_efficiency = 1.5;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
}
