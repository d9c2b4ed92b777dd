#include "qtrack/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "qtrack/errors.hpp"
#include "qtrack/event_model.hpp"

namespace qtrack {

namespace {

// Extreme eigenvalues of A^2 by Lanczos with full reorthogonalization. The
// assembled matrices have few distinct eigenvalues, so the Krylov space
// usually exhausts (beta ~ 0) well before max_iter and the edges are exact.
std::pair<double, double> lanczos_sq_extremes(const IsingSystem& sys) {
  const int n = sys.n;
  const int max_iter = std::min(n, 400);

  std::mt19937_64 eng(12345);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v);

  double prev_lo = std::numeric_limits<double>::quiet_NaN();
  double prev_hi = std::numeric_limits<double>::quiet_NaN();
  double lo = 0.0, hi = 0.0;

  for (int k = 0; k < max_iter; ++k) {
    Eigen::VectorXd w = apply_system(sys, apply_system(sys, basis[k]));
    double a = basis[k].dot(w);
    alpha.push_back(a);
    w -= a * basis[k];
    if (k > 0) w -= beta[k - 1] * basis[k - 1];
    // Two rounds of full reorthogonalization keep the basis numerically
    // orthogonal even for badly clustered spectra.
    for (int round = 0; round < 2; ++round)
      for (const Eigen::VectorXd& u : basis) w -= u.dot(w) * u;

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      tri(i, i) = alpha[i];
      if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[i - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    lo = es.eigenvalues()(0);
    hi = es.eigenvalues()(k);

    double b = w.norm();
    double scale = std::max(1.0, std::abs(hi));
    if (b < 1e-13 * scale) break;  // Krylov space exhausted, edges exact
    if (k >= 2 && std::abs(lo - prev_lo) < 1e-13 * scale &&
        std::abs(hi - prev_hi) < 1e-13 * scale)
      break;
    prev_lo = lo;
    prev_hi = hi;
    beta.push_back(b);
    basis.push_back(w / b);
  }

  return {std::sqrt(std::max(lo, 0.0)), std::sqrt(std::max(hi, 0.0))};
}

}  // namespace

std::pair<double, double> extreme_singular_values(const IsingSystem& sys,
                                                  int dense_limit) {
  if (sys.n == 0) throw DataError("empty system has no singular values");
  if (sys.n == 1) {
    double s = std::abs(sys.diag(0));
    return {s, s};
  }
  if (sys.n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_matrix(sys));
    if (es.info() != Eigen::Success)
      throw NumericError("eigendecomposition failed");
    Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
    return {mags.minCoeff(), mags.maxCoeff()};
  }
  return lanczos_sq_extremes(sys);
}

namespace {

std::vector<StudyRecord> run_sweep(SweepRange particles, SweepRange layers,
                                   const std::vector<std::uint64_t>& seeds,
                                   const Hyperparams& hp, bool with_kappa) {
  validate_hyperparams(hp);
  if (particles.lo < 0) throw ConfigError("study: particles must be >= 0");
  if (layers.lo < 1 && layers.hi >= layers.lo)
    throw ConfigError("study: layers must be >= 1");

  std::vector<StudyRecord> records;
  for (int p = particles.lo; p <= particles.hi; ++p)
    for (int l = layers.lo; l <= layers.hi; ++l)
      for (std::uint64_t seed : seeds) {
        ToyConfig cfg;
        cfg.n_layers = l;
        cfg.n_particles = p;
        cfg.rng_seed = seed;
        Event event = generate_event(cfg);
        DoubletGraph graph = build_graph(event, hp.epsilon, hp.lambda);
        IsingSystem sys = assemble(graph, hp, CouplingMode::step);

        StudyRecord rec;
        rec.particles = p;
        rec.layers = l;
        rec.seed = seed;
        rec.n_doublets = sys.n;
        rec.n_pad = sys.n > 0 ? next_pow2(sys.n) : 0;
        SparsityStats stats = sparsity_stats(sys);
        rec.nnz = stats.nnz;
        rec.max_row_nnz = stats.max_row_nnz;
        rec.density = stats.density;
        rec.kappa = std::numeric_limits<double>::quiet_NaN();
        if (with_kappa && sys.n > 0) {
          auto [smin, smax] = extreme_singular_values(sys);
          if (smin <= 1e-12 * smax) {
            rec.singular = true;
            rec.kappa = std::numeric_limits<double>::infinity();
          } else {
            rec.kappa = smax / smin;
          }
        }
        records.push_back(rec);
      }
  return records;
}

}  // namespace

std::vector<StudyRecord> run_sparsity_study(
    SweepRange particles, SweepRange layers,
    const std::vector<std::uint64_t>& seeds, const Hyperparams& hp) {
  return run_sweep(particles, layers, seeds, hp, false);
}

std::vector<StudyRecord> run_kappa_study(SweepRange particles,
                                         SweepRange layers,
                                         const std::vector<std::uint64_t>& seeds,
                                         const Hyperparams& hp) {
  return run_sweep(particles, layers, seeds, hp, true);
}

std::string study_csv(const std::vector<StudyRecord>& records) {
  std::string out =
      "particles,layers,seed,n_doublets,n_pad,nnz,max_row_nnz,density,kappa\n";
  for (const StudyRecord& rec : records) {
    out += std::to_string(rec.particles);
    out += ',' + std::to_string(rec.layers);
    out += ',' + std::to_string(rec.seed);
    out += ',' + std::to_string(rec.n_doublets);
    out += ',' + std::to_string(rec.n_pad);
    out += ',' + std::to_string(rec.nnz);
    out += ',' + std::to_string(rec.max_row_nnz);
    out += ',' + format_double(rec.density);
    out += ',';
    if (std::isinf(rec.kappa))
      out += "inf";
    else if (!std::isnan(rec.kappa))
      out += format_double(rec.kappa);
    out += '\n';
  }
  return out;
}

}  // namespace qtrack
