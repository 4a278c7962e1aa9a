#pragma once

#include <Eigen/Dense>

#include "gyro/polyalg/recurrence.hpp"

namespace gyro::polyalg {

struct QuadratureRule {
  Eigen::VectorXd nodes;    ///< strictly increasing, inside (-1,1)
  Eigen::VectorXd weights;  ///< positive, summing to the mass
  int size() const { return static_cast<int>(nodes.size()); }
};

enum class NewtonPolish {
  single,    ///< one Newton step
  converge,  ///< iterate until |dz| <= 1e-15
};

/// Golub-Welsch nodes, Newton-polished, weights 1 / sum_i P_i(z_j)^2.
QuadratureRule gauss_quadrature(const Recurrence& rec, int n_nodes, NewtonPolish polish = NewtonPolish::single);

/// Convenience Gauss rule for a classical Jacobi weight.
QuadratureRule gauss_jacobi(double a, double b, int n_nodes);

}  // namespace gyro::polyalg
