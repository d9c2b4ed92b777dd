#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtrack/errors.hpp"
#include "qtrack/pipeline.hpp"
#include "qtrack/run_config.hpp"
#include "qtrack/studies.hpp"

namespace fs = std::filesystem;
using namespace qtrack;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

EventFormat format_of(const fs::path& path, const std::string& fallback) {
  std::string ext = path.extension().string();
  if (ext == ".json") return EventFormat::json;
  if (ext == ".csv") return EventFormat::csv;
  if (fallback == "json") return EventFormat::json;
  if (fallback == "csv") return EventFormat::csv;
  throw ConfigError("cannot infer event format for " + path.string());
}

std::vector<Event> read_events(const RunConfig& cfg) {
  if (cfg.input.empty()) return generate_batch(cfg.toy, cfg.events);

  fs::path in(cfg.input);
  if (fs::is_directory(in)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".json" || ext == ".csv") files.push_back(entry.path());
    }
    if (files.empty())
      throw DataError("no event files found in " + in.string());
    std::sort(files.begin(), files.end());
    std::vector<Event> events;
    events.reserve(files.size());
    for (const fs::path& f : files)
      events.push_back(read_event(f, format_of(f, cfg.format)));
    return events;
  }
  if (!fs::exists(in)) throw DataError("input path does not exist: " + in.string());
  return {read_event(in, format_of(in, cfg.format))};
}

std::string indexed_name(const char* stem, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%05d%s", stem, i, ext);
  return buf;
}

SolverMode solver_mode(const RunConfig& cfg) {
  if (cfg.mode == "classical") return SolverMode::classical;
  if (cfg.mode == "hhl-oracle") return SolverMode::hhl_oracle;
  return SolverMode::hhl_circuit;
}

CouplingMode coupling_mode(const RunConfig& cfg) {
  return cfg.coupling == "dp" ? CouplingMode::dp_smooth : CouplingMode::step;
}

int run_generate(const RunConfig& cfg) {
  if (cfg.output.empty()) throw ConfigError("generate requires --output");
  std::vector<Event> events = generate_batch(cfg.toy, cfg.events);

  fs::path out(cfg.output);
  std::string ext = out.extension().string();
  if (events.size() == 1 && (ext == ".json" || ext == ".csv")) {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_event(events[0], out, format_of(out, cfg.format));
    std::cout << "wrote 1 event\n";
    return 0;
  }
  fs::create_directories(out);
  const char* suffix = cfg.format == "csv" ? ".csv" : ".json";
  EventFormat fmt = cfg.format == "csv" ? EventFormat::csv : EventFormat::json;
  for (std::size_t i = 0; i < events.size(); ++i)
    write_event(events[i], out / indexed_name("event", static_cast<int>(i), suffix),
                fmt);
  std::cout << "wrote " << events.size() << " events\n";
  return 0;
}

std::string solution_dump(const PipelineResult& res) {
  std::string text;
  for (Eigen::Index i = 0; i < res.solution.s.size(); ++i) {
    text += std::to_string(i);
    text += ' ';
    text += format_double(res.solution.s[i]);
    text += ' ';
    text += res.solution.active[i] ? '1' : '0';
    text += '\n';
  }
  return text;
}

std::string tracks_dump(const PipelineResult& res) {
  std::string text;
  for (const TrackCandidate& t : res.tracks) {
    for (std::size_t k = 0; k < t.hit_ids.size(); ++k) {
      if (k) text += ',';
      text += std::to_string(t.hit_ids[k]);
    }
    text += '\n';
  }
  return text;
}

int run_reconstruct(const RunConfig& cfg, bool dump_system) {
  if (cfg.output.empty()) throw ConfigError("reconstruct requires --output");
  std::vector<Event> events = read_events(cfg);
  fs::path out(cfg.output);
  fs::create_directories(out);

  const SolverMode solver = solver_mode(cfg);
  const CouplingMode coupling = coupling_mode(cfg);

  nlohmann::json jrows = nlohmann::json::array();
  std::string csv =
      "event,n_doublets,n_tracks,n_accepted,n_correct,n_clones,n_fakes,"
      "track_efficiency,fake_rate,mean_purity,mean_hit_efficiency,"
      "seg_efficiency,seg_purity,residual_norm,success_probability,fidelity\n";

  for (std::size_t i = 0; i < events.size(); ++i) {
    PipelineResult res =
        reconstruct_event(events[i], cfg.hp, solver, coupling, cfg.max_skip);
    const int idx = static_cast<int>(i);
    write_text(out / indexed_name("solution", idx, ".txt"), solution_dump(res));
    write_text(out / indexed_name("tracks", idx, ".txt"), tracks_dump(res));
    if (dump_system) {
      std::ostringstream sys_dump;
      write_coordinate_dump(res.system, sys_dump);
      write_text(out / indexed_name("system", idx, ".txt"), sys_dump.str());
    }

    const MetricsReport& r = res.report;
    csv += std::to_string(idx);
    csv += ',' + std::to_string(res.system.n);
    csv += ',' + std::to_string(r.n_tracks);
    csv += ',' + std::to_string(r.n_accepted);
    csv += ',' + std::to_string(r.n_correct);
    csv += ',' + std::to_string(r.n_clones);
    csv += ',' + std::to_string(r.n_fakes);
    csv += ',' + format_double(r.track_efficiency);
    csv += ',' + format_double(r.fake_rate);
    csv += ',' + format_double(r.mean_purity);
    csv += ',' + format_double(r.mean_hit_efficiency);
    csv += ',' + format_double(res.segments.efficiency);
    csv += ',' + format_double(res.segments.purity);
    csv += ',' + format_double(res.solution.residual_norm);
    csv += ',';
    if (res.hhl) csv += format_double(res.hhl->success_probability);
    csv += ',';
    if (res.hhl) csv += format_double(res.hhl->fidelity);
    csv += '\n';

    nlohmann::json row;
    row["event"] = idx;
    row["n_doublets"] = res.system.n;
    row["n_tracks"] = r.n_tracks;
    row["n_accepted"] = r.n_accepted;
    row["n_correct"] = r.n_correct;
    row["n_clones"] = r.n_clones;
    row["n_fakes"] = r.n_fakes;
    row["track_efficiency"] = r.track_efficiency;
    row["fake_rate"] = r.fake_rate;
    row["mean_purity"] = r.mean_purity;
    row["mean_hit_efficiency"] = r.mean_hit_efficiency;
    row["seg_efficiency"] = res.segments.efficiency;
    row["seg_purity"] = res.segments.purity;
    row["residual_norm"] = res.solution.residual_norm;
    row["success_probability"] =
        res.hhl ? nlohmann::json(res.hhl->success_probability)
                : nlohmann::json(nullptr);
    row["fidelity"] = res.hhl ? nlohmann::json(res.hhl->fidelity)
                              : nlohmann::json(nullptr);
    jrows.push_back(std::move(row));
  }

  if (cfg.format == "csv")
    write_text(out / "metrics.csv", csv);
  else
    write_text(out / "metrics.json", jrows.dump(2) + "\n");
  std::cout << "processed " << events.size() << " events\n";
  return 0;
}

int run_calibrate(const RunConfig& cfg) {
  std::vector<Event> events = read_events(cfg);
  double threshold = calibrate_threshold(events, cfg.hp);
  std::string text = format_double(threshold) + "\n";
  std::cout << text;
  if (!cfg.output.empty()) write_text(cfg.output, text);
  return 0;
}

int run_study(const RunConfig& cfg, const std::string& kind) {
  if (kind != "sparsity" && kind != "kappa")
    throw ConfigError("study kind must be sparsity or kappa");
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < cfg.study_seeds; ++k)
    seeds.push_back(cfg.toy.rng_seed + static_cast<std::uint64_t>(k));
  SweepRange particles{cfg.min_particles, cfg.max_particles};
  SweepRange layers{cfg.min_layers, cfg.max_layers};
  std::vector<StudyRecord> records =
      kind == "sparsity" ? run_sparsity_study(particles, layers, seeds, cfg.hp)
                         : run_kappa_study(particles, layers, seeds, cfg.hp);
  std::string csv = study_csv(records);
  if (cfg.output.empty())
    std::cout << csv;
  else
    write_text(cfg.output, csv);
  return 0;
}

int run_hhl_report(const RunConfig& cfg) {
  std::vector<Event> events = read_events(cfg);
  const SolverMode solver = solver_mode(cfg);
  const CouplingMode coupling = coupling_mode(cfg);

  std::string csv = resource_report_csv_header() + "\n";
  nlohmann::json jrows = nlohmann::json::array();
  for (const Event& event : events) {
    DoubletGraph graph = build_graph(event, cfg.hp.epsilon, cfg.hp.lambda,
                                     cfg.max_skip);
    IsingSystem sys = assemble(graph, cfg.hp, coupling);
    if (sys.n == 0) continue;  // nothing to size for an empty system
    IsingSystem padded = pad_system(sys);
    RegisterPlan plan = plan_registers(padded);

    HHLResult result;
    const HHLResult* result_ptr = nullptr;
    if (solver == SolverMode::hhl_oracle) {
      result = solve_spectral_oracle(padded, plan);
      result_ptr = &result;
    } else if (solver == SolverMode::hhl_circuit) {
      result = solve_full_circuit(padded, plan);
      result_ptr = &result;
    }
    ResourceReport report = make_resource_report(plan, result_ptr);
    csv += resource_report_csv_row(report) + "\n";
    jrows.push_back(nlohmann::json::parse(resource_report_json(report)));
  }

  std::string text = cfg.format == "json" ? jrows.dump(2) + "\n" : csv;
  if (cfg.output.empty())
    std::cout << text;
  else
    write_text(cfg.output, text);
  return 0;
}

void report_error(const char* kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  try {
    // The config file layer must land before flag parsing so flags win.
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc)
        cfg = load_config_file(argv[i + 1], cfg);
      else if (arg.rfind("--config=", 0) == 0)
        cfg = load_config_file(arg.substr(9), cfg);
    }
  } catch (const ConfigError& e) {
    report_error("config", e.what());
    return 2;
  }

  CLI::App app{"Track reconstruction on an Ising doublet model with a "
               "classical pseudo-inverse or a simulated HHL linear solver"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);

  std::string config_path;  // consumed by the pre-scan above
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--epsilon", cfg.hp.epsilon, "angular step tolerance");
  app.add_option("--lambda", cfg.hp.lambda, "smooth-weight exponent");
  app.add_option("--alpha", cfg.hp.alpha, "bifurcation penalty");
  app.add_option("--beta", cfg.hp.beta, "occupancy penalty");
  app.add_option("--gamma", cfg.hp.gamma, "spectral diagonal shift");
  app.add_option("--delta", cfg.hp.delta, "gap shift");
  app.add_option("--threshold", cfg.hp.threshold, "activation threshold");
  app.add_option("--layers", cfg.toy.n_layers, "toy detector layers");
  app.add_option("--particles", cfg.toy.n_particles, "particles per event");
  app.add_option("--layer-spacing", cfg.toy.layer_spacing, "layer spacing [mm]");
  app.add_option("--half-aperture-x", cfg.toy.half_aperture_x,
                 "half aperture in x [mm]");
  app.add_option("--half-aperture-y", cfg.toy.half_aperture_y,
                 "half aperture in y [mm]");
  app.add_option("--smear-sigma", cfg.toy.smear_sigma, "hit smearing [mm]");
  app.add_option("--hit-efficiency", cfg.toy.hit_efficiency,
                 "hit keep probability");
  app.add_option("--seed", cfg.toy.rng_seed, "base RNG seed");
  app.add_option("--events", cfg.events, "number of events");
  app.add_option("--mode", cfg.mode, "classical | hhl-oracle | hhl-circuit");
  app.add_option("--coupling", cfg.coupling, "step | dp");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_option("--max-skip", cfg.max_skip, "modules a doublet may skip");
  app.add_option("--input", cfg.input, "event file or directory");
  app.add_option("--output", cfg.output, "output file or directory");
  app.add_option("--min-particles", cfg.min_particles, "study range");
  app.add_option("--max-particles", cfg.max_particles, "study range");
  app.add_option("--min-layers", cfg.min_layers, "study range");
  app.add_option("--max-layers", cfg.max_layers, "study range");
  app.add_option("--study-seeds", cfg.study_seeds, "seeds per study point");

  CLI::App* generate = app.add_subcommand("generate", "generate toy events");
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "run the reconstruction pipeline");
  bool dump_system = false;
  reconstruct->add_flag("--dump-system", dump_system,
                        "also write coordinate dumps of the linear systems");
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "calibrate the activation threshold");
  CLI::App* study = app.add_subcommand("study", "sparsity / condition sweeps");
  std::string study_kind = "kappa";
  study->add_option("--kind", study_kind, "sparsity | kappa");
  CLI::App* hhl_report =
      app.add_subcommand("hhl-report", "quantum resource report");
  for (CLI::App* sub : {generate, reconstruct, calibrate, study, hhl_report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("config", e.what());
    return 2;
  }

  try {
    validate_run_config(cfg);
    if (app.got_subcommand(generate)) return run_generate(cfg);
    if (app.got_subcommand(reconstruct)) return run_reconstruct(cfg, dump_system);
    if (app.got_subcommand(calibrate)) return run_calibrate(cfg);
    if (app.got_subcommand(study)) return run_study(cfg, study_kind);
    if (app.got_subcommand(hhl_report)) return run_hhl_report(cfg);
    report_error("config", "no subcommand given");
    return 2;
  } catch (const ConfigError& e) {
    report_error("config", e.what());
    return 2;
  } catch (const DataError& e) {
    report_error("data", e.what());
    return 3;
  } catch (const NumericError& e) {
    report_error("numeric", e.what());
    return 4;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
}
