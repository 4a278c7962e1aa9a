#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gyro/exec.hpp"
#include "gyro/polyalg/weight.hpp"

namespace gyro::polyalg {

/// Orthonormal three-term recurrence z P_n = beta_n P_{n+1} + alpha_n P_n + beta_{n-1} P_{n-1},
/// with P_0 = 1/sqrt(mass).
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
  double mass = 0.0;
  WeightSpec weight;

  int size() const { return static_cast<int>(alpha.size()); }
  Recurrence truncated(int n_terms) const;
};

Recurrence classical_jacobi_recurrence(double a, double b, int n_terms);

/// Discretized Stieltjes (Lanczos with reorthogonalization) on a Gauss-Jacobi(a, b) proxy rule.
/// proxy_nodes = 0 selects 4 n_terms.
Recurrence stieltjes_recurrence(const WeightSpec& weight, int n_terms, int proxy_nodes = 0);

/// Recurrence for base weight times p, p = slope z + intercept. Needs base.size() >= n_terms + 1.
Recurrence christoffel_lift_linear(const Recurrence& base, const LinearFactor& factor, int n_terms);

/// Recurrence for base weight times (x - z)(x - conj z). Needs base.size() >= n_terms + 1.
Recurrence christoffel_lift_quadratic(const Recurrence& base, const QuadraticFactor& factor, int n_terms);

/// Classical seed, optional Stieltjes base stage for non-integer exponents, then integer lifts.
Recurrence recurrence_for_weight(const WeightSpec& weight, int n_terms);

/// Number of recurrence terms consumed by the integer lifts of recurrence_for_weight.
int lift_count(const WeightSpec& weight);

/// Row n holds P_n at every point; rows 0..n_max.
Eigen::MatrixXd evaluate(const Recurrence& rec, const Eigen::VectorXd& points, int n_max,
                         Exec exec = Exec::parallel);
Eigen::MatrixXd evaluate_derivative(const Recurrence& rec, const Eigen::VectorXd& points, int n_max,
                                    Exec exec = Exec::parallel);

/// P_0..P_{n_max} at one complex point.
std::vector<std::complex<double>> evaluate_complex(const Recurrence& rec, std::complex<double> z, int n_max);

}  // namespace gyro::polyalg
