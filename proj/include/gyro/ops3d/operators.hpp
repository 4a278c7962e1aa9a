#pragma once

#include "gyro/exec.hpp"
#include "gyro/ops3d/block_operator.hpp"
#include "gyro/polyalg/operators.hpp"

namespace gyro::ops3d {

/// Physical derivatives, or the raw forms without the 2 sqrt(c) / (S_o^2 - S_i^2) and vertical scalings.
enum class Scaling { physical, computational };
/// require: throw closure when an output would leave the target truncation; truncate: drop it.
enum class ClosurePolicy { require, truncate };

/// Vertical action applied to P_l^(alpha_in)(v) and expanded in P^(alpha_out).
enum class VerticalOp {
  identity,      ///< P_l
  derivative,    ///< P_l'
  euler,         ///< l P_l - v P_l'
  euler_half,    ///< l P_l - (1 + v) P_l'
  mul_v,         ///< v P_l
  mul_half_z,    ///< (1 + v) P_l / 2
  mul_boundary,  ///< (1 - v^2) P_l
};

/// One product term: vertical action, radial first-order action on Q, and the height power
/// shift. The radial output is multiplied by h^(l_in + height_shift - l_out).
struct Term {
  VerticalOp vertical = VerticalOp::identity;
  polyalg::FirstOrderAction radial = polyalg::FirstOrderAction::identity();
  int height_shift = 0;
  double scale = 1.0;
};

/// Vertical matrix (l_out, l_in) of a vertical action, Gauss-Jacobi projected.
Eigen::MatrixXd vertical_matrix(VerticalOp op, double alpha_in, double alpha_out, int L_in, int L_out);

/// Sum of terms from source to target by per-block radial quadrature.
BlockOperator assemble_terms(const BasisSpec& source, const BasisSpec& target, const std::vector<Term>& terms,
                             ClosurePolicy policy = ClosurePolicy::require, Exec exec = Exec::parallel);

/// D^delta: (alpha, sigma) -> (alpha + 1, sigma + delta).
BlockOperator fundamental(const BasisSpec& spec, int delta, Scaling scaling = Scaling::physical,
                          Exec exec = Exec::parallel);
/// Identity embedding (alpha, sigma) -> (alpha + 1, sigma).
BlockOperator conversion(const BasisSpec& spec, ClosurePolicy policy = ClosurePolicy::require,
                         Exec exec = Exec::parallel);
/// Multiplication by the boundary polynomial, (alpha, sigma) -> (alpha - 1, sigma) on (L + 2, N + deg E + D).
BlockOperator conversion_adjoint(const BasisSpec& spec, Exec exec = Exec::parallel);
/// Target spec of conversion_adjoint.
BasisSpec adjoint_target(const BasisSpec& spec);
/// Multiplication by s / sqrt 2 with spin sigma -> target_sigma, target radial size N + 1.
BlockOperator s_multiply(const BasisSpec& spec, int target_sigma, Exec exec = Exec::parallel);
/// Multiplication by z, target (L + 1, N + ceil(D / 2)).
BlockOperator z_multiply(const BasisSpec& spec, Exec exec = Exec::parallel);

/// Spin order used for vector stacks.
inline const std::vector<int>& vector_spins() {
  static const std::vector<int> s{+1, -1, 0};
  return s;
}

/// Scalar at spec.alpha -> (e+, e-, e0) components at alpha + 1.
SpinOperator gradient(const BasisSpec& spec);
/// (e+, e-, e0) at spec.alpha -> scalar at alpha + 1.
SpinOperator divergence(const BasisSpec& spec);
/// (e+, e-, e0) at spec.alpha -> (e+, e-, e0) at alpha + 1.
SpinOperator curl(const BasisSpec& spec);
/// 2 D- D+ + D0 D0 on a scalar, alpha -> alpha + 2.
SpinOperator scalar_laplacian(const BasisSpec& spec);
/// D- D+ + D+ D- + D0 D0 on the spin spec.sigma component.
BlockOperator spin_laplacian(const BasisSpec& spec);
/// Spin-diagonal vector Laplacian, alpha -> alpha + 2.
SpinOperator vector_laplacian(const BasisSpec& spec);

enum class Coordinate { s_vec, z_vec };
enum class ProductMode { multiply, dot };
/// multiply: scalar -> vector components; dot: vector components (e+/e- for s, e0 for z) -> scalar.
SpinOperator coordinate_multiply(const BasisSpec& spec, Coordinate which, ProductMode mode);

}  // namespace gyro::ops3d
