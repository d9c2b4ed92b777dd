#include "qtrack/classical_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qtrack/errors.hpp"

namespace qtrack {

RelaxedSolution solve_least_squares(const IsingSystem& sys) {
  RelaxedSolution sol;
  sol.threshold = sys.hp.threshold;
  if (sys.n == 0) {
    sol.s = Eigen::VectorXd();
    return sol;
  }
  Eigen::MatrixXd a = dense_matrix(sys);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  svd.setThreshold(sys.n * 1e-12);
  sol.s = svd.solve(sys.b);
  sol.residual_norm = (a * sol.s - sys.b).norm();
  sol.active = apply_threshold(sol.s, sol.threshold);
  return sol;
}

std::vector<std::uint8_t> apply_threshold(const Eigen::VectorXd& s,
                                          double threshold) {
  std::vector<std::uint8_t> active(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    active[i] = s[i] > threshold ? 1 : 0;
  return active;
}

double calibrate_threshold(const std::vector<Event>& events,
                           const Hyperparams& hp) {
  validate_hyperparams(hp);
  if (events.empty())
    throw DataError("threshold calibration needs at least one event");

  double sum = 0.0;
  int used = 0;
  for (const Event& event : events) {
    DoubletGraph graph = build_graph(event, hp.epsilon, hp.lambda);
    IsingSystem sys = assemble(graph, hp, CouplingMode::step);
    RelaxedSolution sol = solve_least_squares(sys);

    std::vector<double> values;
    for (Eigen::Index i = 0; i < sol.s.size(); ++i)
      if (sol.s[i] >= 0.0 && sol.s[i] <= 1.2) values.push_back(sol.s[i]);
    std::sort(values.begin(), values.end());

    std::vector<double> distinct;
    for (double v : values)
      if (distinct.empty() || v - distinct.back() > 1e-9) distinct.push_back(v);
    if (distinct.size() < 2) continue;

    double best_gap = 0.0;
    double midpoint = 0.0;
    for (std::size_t k = 0; k + 1 < distinct.size(); ++k) {
      double gap = distinct[k + 1] - distinct[k];
      if (gap > best_gap) {
        best_gap = gap;
        midpoint = 0.5 * (distinct[k] + distinct[k + 1]);
      }
    }
    sum += midpoint;
    ++used;
  }
  if (used == 0)
    throw DataError(
        "threshold calibration degenerate: no event has two distinct "
        "relaxed values");
  return sum / used;
}

}  // namespace qtrack
