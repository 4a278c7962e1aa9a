#pragma once

#include <string>
#include <vector>

#include "gyro/ops3d/block_operator.hpp"
#include "gyro/ops3d/boundary.hpp"

namespace gyro::eigen {

using basis3d::BasisSpec;
using geometry::Geometry;
using ops3d::cd;
using ops3d::SparseC;

/// Contiguous range of the global vector belonging to one field or equation.
struct Segment {
  std::string name;
  int sigma = 0;
  int offset = 0;
  int size = 0;
};

struct SystemOptions {
  double ekman = 1e-5;
  int L_max = 12;
  int N_max = 24;
  ops3d::TauFlavor tau = ops3d::TauFlavor::conversion;
  /// false drops the viscous term (E = 0 limit) while keeping E in the record.
  bool diffusion = true;
};

/// Damped inertial waves L x = lambda M x with recombined no-slip velocity.
/// Unknowns: V+, V-, V0 (alpha 1), P (alpha 1), then the tau block of each equation.
/// Equations: momentum +, -, 0 (alpha 2) and divergence (alpha 1).
struct SystemAssembly {
  SparseC L, M;
  std::vector<Segment> unknowns;
  std::vector<Segment> equations;
  Geometry geometry;
  int m = 0;
  double ekman = 0;
  SystemOptions options;
  /// Specs with sigma 0; use with_sigma for the spin components.
  BasisSpec velocity;   ///< V, alpha 1, (L, N)
  BasisSpec recombined; ///< U = I^dagger V, alpha 0
  BasisSpec pressure;   ///< P, alpha 1, (L, N)
  int n_tau_per_equation = 0;
  int size() const { return static_cast<int>(L.rows()); }
  const Segment& unknown(const std::string& name) const;
};

SystemAssembly assemble(const Geometry& g, int m, const SystemOptions& opt);

/// Radial tau modes per level: deg of the boundary factor plus deg h^2, so the system is square.
int tau_radial_count(const Geometry& g);

}  // namespace gyro::eigen
