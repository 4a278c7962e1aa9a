#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "gyro/geometry/geometry.hpp"
#include "gyro/polyalg/recurrence.hpp"

namespace gyro::basis3d {

using geometry::Geometry;
using polyalg::Polynomial;
using polyalg::Recurrence;
using polyalg::WeightSpec;

/// Vertical levels l = 0..L-1; level l keeps N - ceil(l D / 2) radial modes, D = deg(h^2).
/// A rectangular truncation keeps N modes at every level.
struct Truncation {
  int L = 0;
  int N = 0;
  int D = 0;
  bool rectangular = false;

  int radial_size(int l) const;
  /// Position of (l, 0) in the flattened (k fastest) ordering.
  int offset(int l) const;
  int size() const;
  bool operator==(const Truncation& o) const = default;
};

struct BasisSpec {
  Geometry geometry;
  int m = 0;
  double alpha = 0.0;
  int sigma = 0;
  int L_max = 1;  ///< number of vertical levels
  int N_max = 1;  ///< radial modes at l = 0
  bool rectangular = false;

  /// Throws invalid-geometry, range or truncation errors.
  void validate() const;
  /// |m + sigma|, the power of s at the axis or the s-tilde power on an annulus.
  int regularity() const { return std::abs(m + sigma); }
  Truncation truncation() const;

  BasisSpec with_alpha(double a) const;
  BasisSpec with_sigma(int s) const;
  BasisSpec with_size(int L, int N) const;
  /// Same (m, alpha, sigma, geometry, truncation) up to floating equality on alpha.
  bool same_space(const BasisSpec& o) const;
};

/// Q_k weight at vertical level l.
WeightSpec level_weight(const BasisSpec& spec, int l);

struct RadialLevel {
  WeightSpec weight;
  Recurrence rec;
};

/// Per-level radial weights and recurrences, produced by lifting level l to l + 1.
struct RadialWeightTable {
  std::vector<RadialLevel> levels;
  /// Recurrence length kept at every level.
  int length = 0;
  const RadialLevel& level(int l) const { return levels.at(static_cast<std::size_t>(l)); }
};

/// Recurrence length kept per level: enough for every operator assembled from this spec.
int hierarchy_length(const BasisSpec& spec);
/// Built once per distinct space and cached.
std::shared_ptr<const RadialWeightTable> build_hierarchy(const BasisSpec& spec);

/// (1+t)^{b/2} on a cylinder, s-tilde^b on an annulus, b = |m + sigma|.
double radial_prefactor(const BasisSpec& spec, double t);
/// h^p for integer p >= 0 as a polynomial in t; throws assembly when h^p is not polynomial.
Polynomial height_power(const Geometry& g, int p);

/// Psi_{m,l,k}(t, v, phi), v = eta (full) or zeta (half extent).
std::complex<double> basis_eval(const BasisSpec& spec, int l, int k, double t, double v, double phi = 0.0);

/// Jacobi-(alpha, alpha) couplings, orthonormal convention:
/// P_l^(a) = gamma_l P_l^(a+1) - delta_l P_{l-2}^(a+1),  d/dv P_l^(a) = lambda_l P_{l-1}^(a+1),
/// v P_l^(a) = beta_l P_{l+1}^(a) + beta_{l-1} P_{l-1}^(a).
struct VerticalCouplings {
  std::vector<double> gamma, delta, lambda, beta;
};
VerticalCouplings vertical_couplings(double alpha, int L);

}  // namespace gyro::basis3d
