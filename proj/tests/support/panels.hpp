#pragma once

// Shared weight panels: radial l-weights drawn from the stretched-domain families.

#include <string>
#include <vector>

#include "gyro/polyalg/weight.hpp"

namespace panel {

struct NamedWeight {
  std::string name;
  gyro::polyalg::WeightSpec weight;
};

inline gyro::polyalg::Polynomial poly(std::vector<double> c) { return gyro::polyalg::Polynomial(std::move(c)); }

// (2 + t)/4
inline gyro::polyalg::Polynomial paraboloid_height() { return poly({0.5, 0.25}); }
// (2 (1+t)^2 + 1)/9
inline gyro::polyalg::Polynomial biconcave_height() { return poly({3.0 / 9, 4.0 / 9, 2.0 / 9}); }
// stilde^2 = Si^2 (1-t) + (1+t) with Si = 0.35
inline gyro::polyalg::Polynomial stilde_sq() { return poly({1 + 0.35 * 0.35, 1 - 0.35 * 0.35}); }

inline std::vector<NamedWeight> orthonormality_panel() {
  using gyro::polyalg::WeightSpec;
  return {
      {"paraboloid l=3 m=2", WeightSpec(0, 2, {{paraboloid_height(), 7}})},
      {"oblate spheroid l=2 m=3", WeightSpec(2.5, 3)},
      {"biconcave disk l=2 m=1", WeightSpec(0, 1, {{biconcave_height(), 2.5}})},
      {"annular paraboloid l=1 m=4", WeightSpec(0, 0, {{paraboloid_height(), 3}, {stilde_sq(), 4}})},
      {"excised sphere l=1 m=2", WeightSpec(1.5, 0, {{stilde_sq(), 2}})},
      {"torus l=1 m=1", WeightSpec(1.5, 1.5, {{stilde_sq(), 1}})},
      {"paraboloid alpha=-1/2 l=1 m=1", WeightSpec(-0.5, 1, {{paraboloid_height(), 2}})},
      {"quadratic factor (t^2+4)^2", WeightSpec(0, 0, {{poly({4, 0, 1}), 2}})},
      {"fractional (3-t)/2 ^1.5", WeightSpec(-0.5, 0.5, {{poly({1.5, -0.5}), 1.5}})},
      {"biconcave alpha=1 m=0", WeightSpec(1, 0, {{biconcave_height(), 1.5}})},
  };
}

inline std::vector<NamedWeight> cross_method_panel() {
  using gyro::polyalg::WeightSpec;
  return {
      {"(2+t)^3", WeightSpec(0, 0, {{poly({2, 1}), 3}})},
      {"paraboloid l=3 m=2", WeightSpec(0, 2, {{paraboloid_height(), 7}})},
      {"quadratic (t^2+4)^2", WeightSpec(0, 0, {{poly({4, 0, 1}), 2}})},
      {"biconcave ^2.5", WeightSpec(0, 1, {{biconcave_height(), 2.5}})},
      {"annular paraboloid l=1 m=4", WeightSpec(0, 0, {{paraboloid_height(), 3}, {stilde_sq(), 4}})},
      {"fractional (3-t)/2 ^1.5", WeightSpec(-0.5, 0.5, {{poly({1.5, -0.5}), 1.5}})},
  };
}

}  // namespace panel
