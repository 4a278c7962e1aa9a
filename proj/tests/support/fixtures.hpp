#pragma once

// Geometries, specs and random fields shared by the operator and eigen tests.

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gyro/basis3d/basis.hpp"
#include "gyro/geometry/geometry.hpp"

namespace fixture {

using gyro::basis3d::BasisSpec;
using gyro::geometry::Extent;
using gyro::geometry::Geometry;
using gyro::geometry::Kind;
using gyro::polyalg::Polynomial;

inline Geometry cylinder(Polynomial htilde, Extent e = Extent::full) {
  Geometry g;
  g.height.htilde = std::move(htilde);
  g.extent = e;
  return g;
}

// h = (1 + 4 s^2)/5
inline Geometry parabolic_cylinder(Extent e = Extent::full) { return cylinder(Polynomial({0.6, 0.4}), e); }

// h = 0.5 + 0.3 s^2 on 0.4 < s < 1
inline Geometry parabolic_annulus(Extent e = Extent::full) {
  Geometry g;
  g.kind = Kind::annulus;
  g.S_i = 0.4;
  g.extent = e;
  g.height.htilde = gyro::geometry::height_from_s(Polynomial({0.5, 0.0, 0.3}), Kind::annulus, 0.4, 1.0);
  return g;
}

// h = sqrt((2 + t)/4), linear htilde under a square root.
inline Geometry root_cylinder() {
  Geometry g = cylinder(Polynomial({0.5, 0.25}));
  g.height.chi_h = 0.5;
  return g;
}

struct NamedGeometry {
  std::string name;
  Geometry g;
};

/// Cylinder and annulus, full and half.
inline std::vector<NamedGeometry> core_panel() {
  return {{"parabolic cylinder", parabolic_cylinder()},
          {"parabolic cylinder half", parabolic_cylinder(Extent::upper_half)},
          {"parabolic annulus", parabolic_annulus()},
          {"parabolic annulus half", parabolic_annulus(Extent::upper_half)}};
}

/// Height-family coverage: closed tops, inner-edge closure and fractional heights.
inline std::vector<NamedGeometry> chi_panel() {
  Geometry torus;
  torus.kind = Kind::annulus;
  torus.S_i = 0.3;
  torus.height.chi_o = 1;
  torus.height.chi_i = 1;
  torus.height.htilde = Polynomial::constant(0.35);
  Geometry inner = torus;
  inner.height.chi_o = 0;
  inner.height.htilde = Polynomial({0.5, 0.1});
  return {{"sphere", gyro::geometry::spheroid_geometry(1.0)},
          {"oblate spheroid", gyro::geometry::spheroid_geometry(0.6)},
          {"excised sphere", gyro::geometry::excised_sphere_geometry(0.35)},
          {"torus-like annulus", torus},
          {"inner-closed annulus", inner},
          {"root cylinder", root_cylinder()}};
}

inline BasisSpec make_spec(Geometry g, int m, double alpha, int sigma, int L, int N) {
  BasisSpec s;
  s.geometry = std::move(g);
  s.m = m;
  s.alpha = alpha;
  s.sigma = sigma;
  s.L_max = L;
  s.N_max = N;
  return s;
}

inline Eigen::VectorXcd random_coeffs(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd c(n);
  for (auto& x : c) x = {d(rng), d(rng)};
  return c;
}

struct Point {
  double s, z;
};

/// Interior sample points away from the axis, walls and lids.
inline std::vector<Point> interior_points(const Geometry& g, int ns = 7, int nz = 5) {
  std::vector<Point> out;
  const double lo = std::max(g.S_i, 0.05 * g.S_o);
  for (int i = 0; i < ns; ++i) {
    const double s = lo + (0.93 * g.S_o - lo) * (i + 0.5) / ns;
    const double h = g.height_at(g.t_of_s(s));
    for (int j = 0; j < nz; ++j) {
      const double f = (j + 0.5) / nz;
      out.push_back({s, g.is_half() ? h * (0.02 + 0.96 * f) : h * (-0.95 + 1.9 * f)});
    }
  }
  return out;
}

}  // namespace fixture
