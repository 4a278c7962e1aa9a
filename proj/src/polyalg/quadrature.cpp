#include "gyro/polyalg/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gyro/error.hpp"

namespace gyro::polyalg {

namespace {

// Values and derivatives of P_0..P_n at z; returns (P_n, P_n', sum_{i<n} P_i^2).
struct NodeEval {
  double pn, dpn, sumsq;
};

NodeEval eval_at(const Recurrence& rec, int n, double z) {
  double p_prev = 0.0, p = 1.0 / std::sqrt(rec.mass);
  double d_prev = 0.0, d = 0.0;
  double sumsq = 0.0;
  for (int k = 0; k < n; ++k) {
    sumsq += p * p;
    const double bprev = k > 0 ? rec.beta[k - 1] : 0.0;
    const double p_next = ((z - rec.alpha[k]) * p - bprev * p_prev) / rec.beta[k];
    const double d_next = ((z - rec.alpha[k]) * d + p - bprev * d_prev) / rec.beta[k];
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d, sumsq};
}

}  // namespace

QuadratureRule gauss_quadrature(const Recurrence& rec, int n, NewtonPolish polish) {
  if (n < 1) throw Error(ErrorKind::truncation, "quadrature needs at least one node");
  if (rec.size() < n)
    throw Error(ErrorKind::truncation, "recurrence has " + std::to_string(rec.size()) +
                                           " terms, quadrature of " + std::to_string(n) + " nodes needs " +
                                           std::to_string(n));
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag(i) = rec.alpha[i];
  for (int i = 0; i + 1 < n; ++i) sub(i) = rec.beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::numerical, "tridiagonal eigensolver did not converge (" +
                                          std::to_string(n) + " nodes)");
  QuadratureRule q;
  q.nodes = es.eigenvalues();
  q.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    double z = q.nodes(j);
    const int max_steps = polish == NewtonPolish::single ? 1 : 20;
    for (int it = 0; it < max_steps; ++it) {
      const NodeEval e = eval_at(rec, n, z);
      const double dz = e.pn / e.dpn;
      if (!std::isfinite(dz)) break;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    q.nodes(j) = z;
    q.weights(j) = 1.0 / eval_at(rec, n, z).sumsq;
  }
  return q;
}

QuadratureRule gauss_jacobi(double a, double b, int n_nodes) {
  return gauss_quadrature(classical_jacobi_recurrence(a, b, n_nodes), n_nodes);
}

}  // namespace gyro::polyalg
