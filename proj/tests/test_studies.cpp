#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/studies.hpp"

using namespace qtrack;

namespace {

IsingSystem toy_system(int layers, int particles, std::uint64_t seed,
                       Hyperparams hp = {}) {
  Event event = testutil::toy_event(layers, particles, seed);
  return assemble(build_graph(event, hp.epsilon, hp.lambda), hp,
                  CouplingMode::step);
}

}  // namespace

TEST_CASE("extreme singular values of small systems") {
  auto [lone_min, lone_max] = extreme_singular_values(toy_system(2, 1, 0));
  CHECK(lone_min == 6.0);
  CHECK(lone_max == 6.0);

  auto [pair_min, pair_max] = extreme_singular_values(toy_system(3, 1, 0));
  CHECK(pair_min == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(pair_max == doctest::Approx(8.0).epsilon(1e-12));

  IsingSystem empty = toy_system(1, 1, 0);
  CHECK_THROWS_AS(extreme_singular_values(empty), DataError);
}

TEST_CASE("singular matrices report a zero extreme") {
  IsingSystem sys;
  sys.n = sys.original_n = 2;
  sys.diag = Eigen::Vector2d(1.0, 1.0);
  sys.offdiag = {{0, 1, -1.0}};
  sys.b = Eigen::Vector2d(1.0, -1.0);
  auto [smin, smax] = extreme_singular_values(sys);
  CHECK(smin <= 1e-12);
  CHECK(smax == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("iterative extremes match the dense eigensolver") {
  IsingSystem sys = toy_system(6, 5, 7);
  REQUIRE(sys.n == 125);
  auto [dense_min, dense_max] = extreme_singular_values(sys);
  auto [lanczos_min, lanczos_max] = extreme_singular_values(sys, 0);
  CHECK(lanczos_min == doctest::Approx(dense_min).epsilon(1e-8));
  CHECK(lanczos_max == doctest::Approx(dense_max).epsilon(1e-8));
  // Path-of-five chains put the edges at 6 -+ 2 sqrt(3).
  CHECK(dense_min ==
        doctest::Approx(6.0 - 2.0 * std::sqrt(3.0)).epsilon(1e-9));
  CHECK(dense_max ==
        doctest::Approx(6.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-9));

  Hyperparams hp;
  hp.beta = 0.3;
  IsingSystem dense_coupled = toy_system(6, 5, 7, hp);
  auto [d_min, d_max] = extreme_singular_values(dense_coupled);
  auto [l_min, l_max] = extreme_singular_values(dense_coupled, 0);
  CHECK(l_min == doctest::Approx(d_min).epsilon(1e-8));
  CHECK(l_max == doctest::Approx(d_max).epsilon(1e-8));
}

TEST_CASE("condition number sweep") {
  Hyperparams hp;
  std::vector<StudyRecord> records =
      run_kappa_study({2, 2}, {3, 4}, {0}, hp);
  REQUIRE(records.size() == 2);
  CHECK(records[0].layers == 3);
  CHECK(records[0].n_doublets == 8);
  CHECK(records[0].n_pad == 8);
  CHECK(records[0].kappa == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(records[1].layers == 4);
  CHECK(records[1].kappa ==
        doctest::Approx((11.0 + 6.0 * std::sqrt(2.0)) / 7.0).epsilon(1e-9));
  CHECK_FALSE(records[0].singular);

  std::vector<StudyRecord> lone = run_kappa_study({1, 1}, {2, 2}, {0}, hp);
  CHECK(lone[0].kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singular sweep points are flagged") {
  Hyperparams hp;
  hp.gamma = -2.0;  // diagonal 2 makes the coupled blocks singular
  std::vector<StudyRecord> records =
      run_kappa_study({1, 1}, {3, 3}, {0}, hp);
  REQUIRE(records.size() == 1);
  CHECK(records[0].singular);
  CHECK(std::isinf(records[0].kappa));
  std::string csv = study_csv(records);
  CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("sparsity sweep goldens") {
  Hyperparams hp;
  std::vector<StudyRecord> records =
      run_sparsity_study({1, 1}, {2, 4}, {0}, hp);
  REQUIRE(records.size() == 3);
  CHECK(records[0].n_doublets == 1);
  CHECK(records[0].nnz == 1);
  CHECK(records[0].density == 1.0);
  CHECK(records[0].n_pad == 1);
  CHECK(records[1].nnz == 4);  // two doublets, one mirrored coupling
  CHECK(records[2].n_doublets == 3);
  CHECK(records[2].nnz == 7);
  CHECK(records[2].max_row_nnz == 3);
  CHECK(records[2].density == doctest::Approx(7.0 / 9.0));
  for (const StudyRecord& rec : records) CHECK(std::isnan(rec.kappa));
}

TEST_CASE("single-track row count grows by three per layer") {
  Hyperparams hp;
  std::vector<StudyRecord> records =
      run_sparsity_study({1, 1}, {3, 10}, {4}, hp);
  REQUIRE(records.size() == 8);
  for (std::size_t k = 1; k < records.size(); ++k)
    CHECK(records[k].nnz - records[k - 1].nnz == 3);
}

TEST_CASE("max row occupancy does not grow with particle count") {
  // Four layers so each chain has an interior doublet (diagonal plus two
  // neighbours); more particles add disjoint chains, not wider rows.
  Hyperparams hp;
  std::vector<StudyRecord> records =
      run_sparsity_study({1, 4}, {4, 4}, {11}, hp);
  REQUIRE(records.size() == 4);
  for (const StudyRecord& rec : records) CHECK(rec.max_row_nnz == 3);
}

TEST_CASE("density falls as occupancy rises") {
  Hyperparams hp;
  hp.epsilon = 1e-9;
  std::vector<StudyRecord> sparse_case =
      run_sparsity_study({5, 5}, {26, 26}, {0}, hp);
  std::vector<StudyRecord> busy_case =
      run_sparsity_study({30, 30}, {26, 26}, {0}, hp);
  REQUIRE(sparse_case.size() == 1);
  REQUIRE(busy_case.size() == 1);
  CHECK(sparse_case[0].n_doublets == 625);
  CHECK(busy_case[0].n_doublets == 22500);
  CHECK(busy_case[0].density < sparse_case[0].density);
}

TEST_CASE("study csv layout") {
  Hyperparams hp;
  std::string header =
      "particles,layers,seed,n_doublets,n_pad,nnz,max_row_nnz,density,kappa";

  CHECK(study_csv({}) == header + "\n");
  std::vector<StudyRecord> empty_range =
      run_sparsity_study({2, 1}, {3, 5}, {0}, hp);
  CHECK(empty_range.empty());

  std::vector<StudyRecord> records =
      run_kappa_study({1, 1}, {4, 4}, {0}, hp);
  std::istringstream iss(study_csv(records));
  std::string line;
  std::getline(iss, line);
  CHECK(line == header);
  std::getline(iss, line);
  CHECK(line.rfind("1,4,0,3,4,7,3,0.77777777777777779,", 0) == 0);
  double kappa = std::stod(line.substr(line.rfind(',') + 1));
  CHECK(kappa == doctest::Approx((11.0 + 6.0 * std::sqrt(2.0)) / 7.0)
                     .epsilon(1e-9));

  std::vector<StudyRecord> no_kappa =
      run_sparsity_study({1, 1}, {4, 4}, {0}, hp);
  std::istringstream iss2(study_csv(no_kappa));
  std::getline(iss2, line);
  std::getline(iss2, line);
  CHECK(line == "1,4,0,3,4,7,3,0.77777777777777779,");
}

TEST_CASE("study input validation") {
  Hyperparams hp;
  CHECK_THROWS_AS(run_sparsity_study({-1, 2}, {3, 3}, {0}, hp), ConfigError);
  CHECK_THROWS_AS(run_sparsity_study({1, 1}, {0, 3}, {0}, hp), ConfigError);
  Hyperparams bad;
  bad.alpha = -1.0;
  CHECK_THROWS_AS(run_kappa_study({1, 1}, {3, 3}, {0}, bad), ConfigError);
}
