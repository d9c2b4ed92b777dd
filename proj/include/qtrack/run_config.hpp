#pragma once

#include <string>
#include <vector>

#include "qtrack/ising_model.hpp"
#include "qtrack/toy_detector.hpp"

namespace qtrack {

// Flat configuration shared by the CLI subcommands. Precedence is
// defaults < config file < command line flags; the file merge only touches
// keys that are present, and the flag layer only fields that were set.
struct RunConfig {
  Hyperparams hp;
  ToyConfig toy;
  int events = 1;
  std::string mode = "classical";  // classical | hhl-oracle | hhl-circuit
  std::string coupling = "step";   // step | dp
  std::string format = "json";     // json | csv
  int max_skip = 0;
  std::string input;
  std::string output;
  int min_particles = 2;
  int max_particles = 5;
  int min_layers = 3;
  int max_layers = 5;
  int study_seeds = 1;
};

// Keys accepted in a JSON config file, mirroring the CLI flag names.
const std::vector<std::string>& config_keys();

// Applies a JSON config on top of cfg. Unknown keys are ConfigErrors.
void merge_config_json(RunConfig& cfg, const std::string& json_text);

RunConfig load_config_file(const std::string& path, RunConfig base);

void validate_run_config(const RunConfig& cfg);

}  // namespace qtrack
