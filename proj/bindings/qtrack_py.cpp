#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "qtrack/errors.hpp"
#include "qtrack/pipeline.hpp"
#include "qtrack/run_config.hpp"
#include "qtrack/studies.hpp"

namespace py = pybind11;
using namespace qtrack;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ising-model track reconstruction with classical and simulated "
            "HHL linear solvers";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Hit>(m, "Hit")
      .def(py::init<>())
      .def_readwrite("id", &Hit::id)
      .def_readwrite("x", &Hit::x)
      .def_readwrite("y", &Hit::y)
      .def_readwrite("z", &Hit::z)
      .def_readwrite("module", &Hit::module)
      .def_readwrite("truth_id", &Hit::truth_id);

  py::class_<TruthParticle>(m, "TruthParticle")
      .def(py::init<>())
      .def_readwrite("id", &TruthParticle::id)
      .def_readwrite("origin", &TruthParticle::origin)
      .def_readwrite("direction", &TruthParticle::direction)
      .def_readwrite("hit_ids", &TruthParticle::hit_ids);

  py::class_<Event>(m, "Event")
      .def(py::init<>())
      .def_readwrite("hits", &Event::hits)
      .def_readwrite("particles", &Event::particles)
      .def_readwrite("geometry_id", &Event::geometry_id)
      .def_readwrite("original_hit_ids", &Event::original_hit_ids)
      .def("n_hits", &Event::n_hits);

  py::enum_<EventFormat>(m, "EventFormat")
      .value("json", EventFormat::json)
      .value("csv", EventFormat::csv);

  m.def("validate_event", &validate_event);
  m.def("finalize_event", &finalize_event);
  m.def("read_event", &read_event);
  m.def("write_event", &write_event);
  m.def("event_to_json", &event_to_json);
  m.def("event_from_json", &event_from_json);
  m.def("event_to_csv", &event_to_csv);
  m.def("event_from_csv", &event_from_csv);

  py::class_<ToyConfig>(m, "ToyConfig")
      .def(py::init<>())
      .def_readwrite("n_layers", &ToyConfig::n_layers)
      .def_readwrite("n_particles", &ToyConfig::n_particles)
      .def_readwrite("layer_spacing", &ToyConfig::layer_spacing)
      .def_readwrite("half_aperture_x", &ToyConfig::half_aperture_x)
      .def_readwrite("half_aperture_y", &ToyConfig::half_aperture_y)
      .def_readwrite("smear_sigma", &ToyConfig::smear_sigma)
      .def_readwrite("hit_efficiency", &ToyConfig::hit_efficiency)
      .def_readwrite("rng_seed", &ToyConfig::rng_seed);

  py::class_<DetectorGeometry>(m, "DetectorGeometry")
      .def(py::init<>())
      .def_readwrite("layer_z", &DetectorGeometry::layer_z)
      .def_readwrite("half_aperture_x", &DetectorGeometry::half_aperture_x)
      .def_readwrite("half_aperture_y", &DetectorGeometry::half_aperture_y);

  m.def("make_geometry", &make_geometry);
  m.def("generate_event", &generate_event);
  m.def("generate_batch", &generate_batch);

  py::class_<Doublet>(m, "Doublet")
      .def_readonly("id", &Doublet::id)
      .def_readonly("hit_a", &Doublet::hit_a)
      .def_readonly("hit_b", &Doublet::hit_b)
      .def_readonly("seg", &Doublet::seg)
      .def_readonly("length", &Doublet::length);

  py::class_<TripletCoupling>(m, "TripletCoupling")
      .def_readonly("i", &TripletCoupling::i)
      .def_readonly("j", &TripletCoupling::j)
      .def_readonly("cos_theta", &TripletCoupling::cos_theta)
      .def_readonly("step", &TripletCoupling::step)
      .def_readonly("dp_weight", &TripletCoupling::dp_weight);

  py::class_<DoubletGraph>(m, "DoubletGraph")
      .def_readonly("doublets", &DoubletGraph::doublets)
      .def_readonly("couplings", &DoubletGraph::couplings)
      .def_readonly("hit_module", &DoubletGraph::hit_module)
      .def_readonly("n_hits", &DoubletGraph::n_hits)
      .def_readonly("epsilon", &DoubletGraph::epsilon)
      .def_readonly("lambda_", &DoubletGraph::lambda);

  m.def("build_doublets", &build_doublets, py::arg("event"),
        py::arg("max_skip") = 0);
  m.def("angular_step", &angular_step);
  m.def("dp_angular_weight", &dp_angular_weight);
  m.def("build_couplings", &build_couplings);
  m.def("build_graph", &build_graph, py::arg("event"), py::arg("epsilon"),
        py::arg("lambda"), py::arg("max_skip") = 0);

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init<>())
      .def_readwrite("epsilon", &Hyperparams::epsilon)
      .def_readwrite("lambda_", &Hyperparams::lambda)
      .def_readwrite("alpha", &Hyperparams::alpha)
      .def_readwrite("beta", &Hyperparams::beta)
      .def_readwrite("gamma", &Hyperparams::gamma)
      .def_readwrite("delta", &Hyperparams::delta)
      .def_readwrite("threshold", &Hyperparams::threshold);

  py::enum_<CouplingMode>(m, "CouplingMode")
      .value("step", CouplingMode::step)
      .value("dp_smooth", CouplingMode::dp_smooth);

  py::class_<OffDiagEntry>(m, "OffDiagEntry")
      .def_readonly("i", &OffDiagEntry::i)
      .def_readonly("j", &OffDiagEntry::j)
      .def_readonly("value", &OffDiagEntry::value);

  py::class_<IsingSystem>(m, "IsingSystem")
      .def_readonly("n", &IsingSystem::n)
      .def_readonly("original_n", &IsingSystem::original_n)
      .def_readonly("padded", &IsingSystem::padded)
      .def_readonly("n_hits", &IsingSystem::n_hits)
      .def_readonly("mode", &IsingSystem::mode)
      .def_readonly("hp", &IsingSystem::hp)
      .def_readonly("diag", &IsingSystem::diag)
      .def_readonly("offdiag", &IsingSystem::offdiag)
      .def_readonly("offdiag_uniform", &IsingSystem::offdiag_uniform)
      .def_readonly("b", &IsingSystem::b)
      .def_readonly("h_const", &IsingSystem::h_const);

  m.def("validate_hyperparams", &validate_hyperparams);
  m.def("bifurcation_penalty", &bifurcation_penalty);
  m.def("assemble", &assemble);
  m.def("evaluate_h", &evaluate_h);
  m.def("gradient_h", &gradient_h);
  m.def("brute_force_ground_state", &brute_force_ground_state);
  m.def("next_pow2", &next_pow2);
  m.def("pad_system", &pad_system);
  m.def("dense_matrix", &dense_matrix);
  m.def("apply_system", &apply_system);
  m.def("coordinate_dump", [](const IsingSystem& sys) {
    std::ostringstream out;
    write_coordinate_dump(sys, out);
    return out.str();
  });

  py::class_<SparsityStats>(m, "SparsityStats")
      .def_readonly("nnz", &SparsityStats::nnz)
      .def_readonly("max_row_nnz", &SparsityStats::max_row_nnz)
      .def_readonly("density", &SparsityStats::density);
  m.def("sparsity_stats", &sparsity_stats);

  py::class_<RelaxedSolution>(m, "RelaxedSolution")
      .def_readonly("s", &RelaxedSolution::s)
      .def_readonly("residual_norm", &RelaxedSolution::residual_norm)
      .def_readonly("threshold", &RelaxedSolution::threshold)
      .def_readonly("active", &RelaxedSolution::active);

  m.def("solve_least_squares", &solve_least_squares);
  m.def("apply_threshold", &apply_threshold);
  m.def("calibrate_threshold", &calibrate_threshold);

  py::class_<RegisterPlan>(m, "RegisterPlan")
      .def_readonly("n", &RegisterPlan::n)
      .def_readonly("n_pad", &RegisterPlan::n_pad)
      .def_readonly("n_b", &RegisterPlan::n_b)
      .def_readonly("n_q", &RegisterPlan::n_q)
      .def_readonly("total_qubits", &RegisterPlan::total_qubits)
      .def_readonly("kappa", &RegisterPlan::kappa)
      .def_readonly("lambda_min", &RegisterPlan::lambda_min)
      .def_readonly("lambda_max", &RegisterPlan::lambda_max)
      .def_readonly("t", &RegisterPlan::t)
      .def_readonly("c_rot", &RegisterPlan::c_rot);

  py::class_<PreparedB>(m, "PreparedB")
      .def_readonly("amplitudes", &PreparedB::amplitudes)
      .def_readonly("norm_constant", &PreparedB::norm_constant);

  py::enum_<HhlMode>(m, "HhlMode")
      .value("spectral_oracle", HhlMode::spectral_oracle)
      .value("full_circuit", HhlMode::full_circuit);

  py::class_<HHLResult>(m, "HHLResult")
      .def_readonly("mode", &HHLResult::mode)
      .def_readonly("s_quantum", &HHLResult::s_quantum)
      .def_readonly("success_probability", &HHLResult::success_probability)
      .def_readonly("fidelity", &HHLResult::fidelity)
      .def_readonly("qpe_residual", &HHLResult::qpe_residual);

  m.def("plan_registers", &plan_registers, py::arg("padded"),
        py::arg("n_q_override") = std::nullopt);
  m.def("prepare_b_state", &prepare_b_state);
  m.def("solve_spectral_oracle", &solve_spectral_oracle);
  m.def("solve_full_circuit", &solve_full_circuit);

  py::class_<ResourceReport>(m, "ResourceReport")
      .def_readonly("n", &ResourceReport::n)
      .def_readonly("n_pad", &ResourceReport::n_pad)
      .def_readonly("n_b", &ResourceReport::n_b)
      .def_readonly("n_q", &ResourceReport::n_q)
      .def_readonly("total_qubits", &ResourceReport::total_qubits)
      .def_readonly("kappa", &ResourceReport::kappa)
      .def_readonly("t", &ResourceReport::t)
      .def_readonly("c_rot", &ResourceReport::c_rot)
      .def_readonly("success_probability", &ResourceReport::success_probability)
      .def_readonly("fidelity", &ResourceReport::fidelity);

  m.def("make_resource_report",
        [](const RegisterPlan& plan, const HHLResult* result) {
          return make_resource_report(plan, result);
        },
        py::arg("plan"), py::arg("result") = nullptr);
  m.def("resource_report_json", &resource_report_json);
  m.def("resource_report_csv_header", &resource_report_csv_header);
  m.def("resource_report_csv_row", &resource_report_csv_row);

  py::class_<TrackCandidate>(m, "TrackCandidate")
      .def_readonly("hit_ids", &TrackCandidate::hit_ids)
      .def_readonly("doublet_ids", &TrackCandidate::doublet_ids);
  m.def("build_tracks", &build_tracks);

  py::class_<TrackMatch>(m, "TrackMatch")
      .def_readonly("track_index", &TrackMatch::track_index)
      .def_readonly("particle_id", &TrackMatch::particle_id)
      .def_readonly("purity", &TrackMatch::purity)
      .def_readonly("hit_efficiency", &TrackMatch::hit_efficiency)
      .def_readonly("correct", &TrackMatch::correct)
      .def_readonly("clone", &TrackMatch::clone);

  py::enum_<BinFeature>(m, "BinFeature")
      .value("polar_angle", BinFeature::polar_angle)
      .value("hit_count", BinFeature::hit_count);

  py::class_<BinningSpec>(m, "BinningSpec")
      .def(py::init<>())
      .def_readwrite("feature", &BinningSpec::feature)
      .def_readwrite("edges", &BinningSpec::edges);

  py::class_<BinnedEfficiency>(m, "BinnedEfficiency")
      .def_readonly("lo", &BinnedEfficiency::lo)
      .def_readonly("hi", &BinnedEfficiency::hi)
      .def_readonly("n_accepted", &BinnedEfficiency::n_accepted)
      .def_readonly("n_correct", &BinnedEfficiency::n_correct)
      .def_readonly("efficiency", &BinnedEfficiency::efficiency);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("n_accepted", &MetricsReport::n_accepted)
      .def_readonly("n_tracks", &MetricsReport::n_tracks)
      .def_readonly("n_correct", &MetricsReport::n_correct)
      .def_readonly("n_clones", &MetricsReport::n_clones)
      .def_readonly("n_fakes", &MetricsReport::n_fakes)
      .def_readonly("track_efficiency", &MetricsReport::track_efficiency)
      .def_readonly("fake_rate", &MetricsReport::fake_rate)
      .def_readonly("mean_purity", &MetricsReport::mean_purity)
      .def_readonly("mean_hit_efficiency", &MetricsReport::mean_hit_efficiency)
      .def_readonly("bins", &MetricsReport::bins);

  py::class_<SegmentMetrics>(m, "SegmentMetrics")
      .def_readonly("n_true", &SegmentMetrics::n_true)
      .def_readonly("n_active", &SegmentMetrics::n_active)
      .def_readonly("n_active_true", &SegmentMetrics::n_active_true)
      .def_readonly("efficiency", &SegmentMetrics::efficiency)
      .def_readonly("purity", &SegmentMetrics::purity);

  m.def("acceptance_filter", &acceptance_filter, py::arg("event"),
        py::arg("min_layers") = 3);
  m.def("match_tracks", &match_tracks, py::arg("tracks"), py::arg("event"),
        py::arg("purity_cut") = 0.7, py::arg("min_layers") = 3);
  m.def("compute_report", &compute_report, py::arg("matches"),
        py::arg("accepted"), py::arg("binning") = std::nullopt);
  m.def("segment_metrics", &segment_metrics);

  m.attr("REFERENCE_TRACK_EFFICIENCY") = kReferenceTrackEfficiency;
  m.attr("REFERENCE_FAKE_RATE") = kReferenceFakeRate;

  py::class_<StudyRecord>(m, "StudyRecord")
      .def_readonly("particles", &StudyRecord::particles)
      .def_readonly("layers", &StudyRecord::layers)
      .def_readonly("seed", &StudyRecord::seed)
      .def_readonly("n_doublets", &StudyRecord::n_doublets)
      .def_readonly("n_pad", &StudyRecord::n_pad)
      .def_readonly("nnz", &StudyRecord::nnz)
      .def_readonly("max_row_nnz", &StudyRecord::max_row_nnz)
      .def_readonly("density", &StudyRecord::density)
      .def_readonly("kappa", &StudyRecord::kappa)
      .def_readonly("singular", &StudyRecord::singular);

  py::class_<SweepRange>(m, "SweepRange")
      .def(py::init<>())
      .def(py::init([](int lo, int hi) { return SweepRange{lo, hi}; }))
      .def_readwrite("lo", &SweepRange::lo)
      .def_readwrite("hi", &SweepRange::hi);

  m.def("extreme_singular_values", &extreme_singular_values, py::arg("system"),
        py::arg("dense_limit") = 512);
  m.def("run_sparsity_study", &run_sparsity_study);
  m.def("run_kappa_study", &run_kappa_study);
  m.def("study_csv", &study_csv);

  py::enum_<SolverMode>(m, "SolverMode")
      .value("classical", SolverMode::classical)
      .value("hhl_oracle", SolverMode::hhl_oracle)
      .value("hhl_circuit", SolverMode::hhl_circuit);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("graph", &PipelineResult::graph)
      .def_readonly("system", &PipelineResult::system)
      .def_readonly("solution", &PipelineResult::solution)
      .def_readonly("plan", &PipelineResult::plan)
      .def_readonly("hhl", &PipelineResult::hhl)
      .def_readonly("tracks", &PipelineResult::tracks)
      .def_readonly("segments", &PipelineResult::segments)
      .def_readonly("report", &PipelineResult::report);

  m.def("reconstruct_event", &reconstruct_event, py::arg("event"),
        py::arg("hp"), py::arg("solver"),
        py::arg("coupling") = CouplingMode::step, py::arg("max_skip") = 0);

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
