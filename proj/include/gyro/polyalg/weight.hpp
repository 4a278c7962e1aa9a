#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gyro/polyalg/polynomial.hpp"

namespace gyro::polyalg {

struct Factor {
  Polynomial poly;
  double exponent = 0.0;
};

/// Generalized Jacobi weight (1-z)^a (1+z)^b prod p_i(z)^c_i on [-1,1].
struct WeightSpec {
  double a = 0.0;
  double b = 0.0;
  std::vector<Factor> factors;

  WeightSpec() = default;
  WeightSpec(double a_, double b_, std::vector<Factor> f = {}) : a(a_), b(b_), factors(std::move(f)) {}

  /// Throws invalid-weight on a, b <= -1 or a factor that is not strictly positive.
  void validate() const;
  double operator()(double z) const;
  bool has_fractional_exponent() const;
  int factor_degree(std::size_t i) const { return factors.at(i).poly.degree(); }

  WeightSpec shifted(double da, double db, const std::vector<double>& dc) const;
  std::string describe() const;
};

/// p(z) = slope z + intercept with no zero in the open interval.
struct LinearFactor {
  double slope = 1.0;
  double intercept = 0.0;
  double z0() const { return -intercept / slope; }
  /// Throws invalid-factor when the root lies inside (-1,1).
  void validate() const;
};

/// Monic (x - z)(x - conj z) with Im z != 0.
struct QuadraticFactor {
  std::complex<double> root;
  Polynomial monic() const;
  void validate() const;
};

/// Positive-on-the-interval pieces of one factor polynomial: scale * prod linear * prod quadratic.
struct Factorization {
  double scale = 1.0;
  std::vector<LinearFactor> linear;
  std::vector<QuadraticFactor> quadratic;
};

/// Roots within 1e-10 (1 + |r|) of the real line count as real; real roots in [-1,1] throw invalid-weight.
Factorization factorize(const Polynomial& p);

/// Chebyshev points of the first kind on [-1,1] plus both endpoints.
std::vector<double> positivity_probe_points();

}  // namespace gyro::polyalg
