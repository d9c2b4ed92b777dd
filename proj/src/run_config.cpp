#include "qtrack/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtrack/errors.hpp"

namespace qtrack {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "epsilon",       "lambda",          "alpha",
      "beta",          "gamma",           "delta",
      "threshold",     "layers",          "particles",
      "layer_spacing", "half_aperture_x", "half_aperture_y",
      "smear_sigma",   "hit_efficiency",  "seed",
      "events",        "mode",            "coupling",
      "format",        "max_skip",        "input",
      "output",        "min_particles",   "max_particles",
      "min_layers",    "max_layers",      "study_seeds"};
  return keys;
}

void merge_config_json(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must be a JSON object");

  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epsilon") cfg.hp.epsilon = value.get<double>();
      else if (key == "lambda") cfg.hp.lambda = value.get<int>();
      else if (key == "alpha") cfg.hp.alpha = value.get<double>();
      else if (key == "beta") cfg.hp.beta = value.get<double>();
      else if (key == "gamma") cfg.hp.gamma = value.get<double>();
      else if (key == "delta") cfg.hp.delta = value.get<double>();
      else if (key == "threshold") cfg.hp.threshold = value.get<double>();
      else if (key == "layers") cfg.toy.n_layers = value.get<int>();
      else if (key == "particles") cfg.toy.n_particles = value.get<int>();
      else if (key == "layer_spacing") cfg.toy.layer_spacing = value.get<double>();
      else if (key == "half_aperture_x") cfg.toy.half_aperture_x = value.get<double>();
      else if (key == "half_aperture_y") cfg.toy.half_aperture_y = value.get<double>();
      else if (key == "smear_sigma") cfg.toy.smear_sigma = value.get<double>();
      else if (key == "hit_efficiency") cfg.toy.hit_efficiency = value.get<double>();
      else if (key == "seed") cfg.toy.rng_seed = value.get<std::uint64_t>();
      else if (key == "events") cfg.events = value.get<int>();
      else if (key == "mode") cfg.mode = value.get<std::string>();
      else if (key == "coupling") cfg.coupling = value.get<std::string>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "max_skip") cfg.max_skip = value.get<int>();
      else if (key == "input") cfg.input = value.get<std::string>();
      else if (key == "output") cfg.output = value.get<std::string>();
      else if (key == "min_particles") cfg.min_particles = value.get<int>();
      else if (key == "max_particles") cfg.max_particles = value.get<int>();
      else if (key == "min_layers") cfg.min_layers = value.get<int>();
      else if (key == "max_layers") cfg.max_layers = value.get<int>();
      else if (key == "study_seeds") cfg.study_seeds = value.get<int>();
      else throw ConfigError("config file: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  merge_config_json(base, buf.str());
  return base;
}

void validate_run_config(const RunConfig& cfg) {
  validate_hyperparams(cfg.hp);
  validate_toy_config(cfg.toy);
  if (cfg.events < 0) throw ConfigError("events must be >= 0");
  if (cfg.mode != "classical" && cfg.mode != "hhl-oracle" &&
      cfg.mode != "hhl-circuit")
    throw ConfigError("mode must be classical, hhl-oracle or hhl-circuit");
  if (cfg.coupling != "step" && cfg.coupling != "dp")
    throw ConfigError("coupling must be step or dp");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json or csv");
  if (cfg.max_skip < 0) throw ConfigError("max_skip must be >= 0");
  if (cfg.study_seeds < 1) throw ConfigError("study_seeds must be >= 1");
}

}  // namespace qtrack
