#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hapticbar/config.hpp"
#include "hapticbar/fem.hpp"
#include "hapticbar/model.hpp"

namespace testing_support {

using namespace hapticbar;

// Fixed-seed generator for property tests; every suite picks its own seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

 private:
  std::mt19937_64 rng_;
};

// Lumped single-DOF system m x'' + c x' + k x = f.
inline AssembledSystem sdof(double m, double c, double k) {
  AssembledSystem s;
  s.mass = Eigen::MatrixXd::Constant(1, 1, m);
  s.damping = Eigen::MatrixXd::Constant(1, 1, c);
  s.stiffness = Eigen::MatrixXd::Constant(1, 1, k);
  s.mesh.length = 1.0;
  s.mesh.node_positions = {0.0};
  s.dofs = {Dof{0, DofKind::Translation}};
  return s;
}

inline StudyConfig reference_bar(const std::string& material = "aluminum", int elements = 30) {
  StudyConfig cfg;
  cfg.material = material_catalog(material);
  cfg.geometry = reference_geometry();
  cfg.element_count = elements;
  return cfg;
}

inline StudyConfig pinned_bar(const std::string& material = "aluminum", int elements = 30) {
  StudyConfig cfg = reference_bar(material, elements);
  cfg.pinned_positions = {0.0, cfg.geometry.length};
  return cfg;
}

inline ActuatorAttachment actuator_at(const std::string& id, double position) {
  ActuatorAttachment a = reference_actuator();
  a.id = id;
  a.position = position;
  return a;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing_support
