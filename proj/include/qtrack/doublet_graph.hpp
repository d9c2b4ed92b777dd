#pragma once

#include <array>
#include <vector>

#include "qtrack/event_model.hpp"

namespace qtrack {

// Oriented hit pair pointing in +z (from a lower module to a higher one).
struct Doublet {
  int id = 0;
  int hit_a = 0;  // lower-module end
  int hit_b = 0;  // higher-module end
  std::array<double, 3> seg{0.0, 0.0, 0.0};  // hit_b - hit_a
  double length = 0.0;
};

// Pair of doublets sharing a middle hit: doublet i ends where j begins.
struct TripletCoupling {
  int i = 0;
  int j = 0;
  double cos_theta = 0.0;
  int step = 0;       // binary activation at the graph's epsilon
  double dp_weight = 0.0;  // cos^lambda(theta) / (len_i + len_j)
};

struct DoubletGraph {
  std::vector<Doublet> doublets;
  std::vector<TripletCoupling> couplings;
  std::vector<int> hit_module;  // module of hit id h
  int n_hits = 0;
  double epsilon = 0.0;  // parameters the couplings were built with
  int lambda = 1;
};

// Pairs hits on modules m and m+1 (plus up to max_skip skipped modules).
std::vector<Doublet> build_doublets(const Event& event, int max_skip = 0);

// 1 when the opening angle satisfies cos(theta) >= 1 - epsilon, else 0.
int angular_step(double cos_theta, double epsilon);

// Smooth alignment weight cos^lambda(theta) / (len_i + len_j).
double dp_angular_weight(double cos_theta, double len_i, double len_j,
                         int lambda);

std::vector<TripletCoupling> build_couplings(const std::vector<Doublet>& doublets,
                                             double epsilon, int lambda);

DoubletGraph build_graph(const Event& event, double epsilon, int lambda,
                         int max_skip = 0);

}  // namespace qtrack
