#include "gyro/polyalg/operators.hpp"

#include <cmath>
#include <sstream>

#include "gyro/error.hpp"
#include "gyro/polyalg/quadrature.hpp"

namespace gyro::polyalg {

namespace {
constexpr double kStructuralZero = 1e-14;
// Entries outside a declared band larger than this (relative) signal an assembly bug.
constexpr double kBandLeak = 1e-10;
}  // namespace

int FirstOrderAction::degree() const {
  int d = c0.is_zero() ? 0 : c0.degree();
  if (!c1.is_zero()) d = std::max(d, c1.degree() - 1);
  return std::max(d, 0);
}

int entries_quadrature_size(int rows, int cols, int action_degree) {
  const int total = (rows - 1) + (cols - 1) + action_degree + 1;
  return (total + 1) / 2 + 2;
}

BandedMatrix operator_entries(const FirstOrderAction& action, const Recurrence& dom, const Recurrence& codom,
                              int rows, int cols, std::optional<std::pair<int, int>> declared_band) {
  if (rows <= 0 || cols <= 0) {
    BandedMatrix empty(std::max(rows, 0), std::max(cols, 0), 0, -1);
    empty.domain = dom.weight;
    empty.codomain = codom.weight;
    return empty;
  }
  const int nq = entries_quadrature_size(rows, cols, action.degree());
  if (codom.size() < std::max(nq, rows - 1)) {
    std::ostringstream os;
    os << "codomain recurrence has " << codom.size() << " terms; operator entries need " << nq;
    throw Error(ErrorKind::truncation, os.str());
  }
  const QuadratureRule q = gauss_quadrature(codom, nq);
  const Eigen::MatrixXd pd = evaluate(dom, q.nodes, cols - 1, Exec::serial);
  const Eigen::MatrixXd pq = evaluate(codom, q.nodes, rows - 1, Exec::serial);
  Eigen::MatrixXd applied(cols, nq);
  {
    Eigen::MatrixXd d;
    if (!action.c1.is_zero()) d = evaluate_derivative(dom, q.nodes, cols - 1, Exec::serial);
    for (int j = 0; j < nq; ++j) {
      const double z = q.nodes(j);
      const double a0 = action.c0(z), a1 = action.c1(z);
      for (int n = 0; n < cols; ++n) applied(n, j) = a0 * pd(n, j) + (action.c1.is_zero() ? 0.0 : a1 * d(n, j));
    }
  }
  const Eigen::MatrixXd dense = pq * q.weights.asDiagonal() * applied.transpose();
  BandedMatrix out;
  if (declared_band) {
    const double scale = dense.size() ? dense.cwiseAbs().maxCoeff() : 0.0;
    out = BandedMatrix(rows, cols, declared_band->first, declared_band->second);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const double v = dense(r, c);
        if (out.in_band(r, c)) {
          if (std::abs(v) > kStructuralZero * scale) out.at(r, c) = v;
        } else if (std::abs(v) > kBandLeak * scale) {
          std::ostringstream os;
          os << "entry (" << r << "," << c << ") = " << v << " lies outside the declared band";
          throw Error(ErrorKind::assembly, os.str());
        }
      }
  } else {
    out = BandedMatrix::from_dense(dense, kStructuralZero);
  }
  out.domain = dom.weight;
  out.codomain = codom.weight;
  return out;
}

namespace {

Polynomial param_factor(const WeightSpec& w, WhichParam which) {
  switch (which.kind) {
    case WhichParam::a: return Polynomial::linear(-1.0, 1.0);
    case WhichParam::b: return Polynomial::linear(1.0, 1.0);
    case WhichParam::factor:
      if (which.index < 0 || which.index >= static_cast<int>(w.factors.size()))
        throw Error(ErrorKind::domain_mismatch, "factor index out of range");
      return w.factors[which.index].poly;
  }
  return {};
}

WeightSpec shift_param(const WeightSpec& w, WhichParam which, double d) {
  WeightSpec out = w;
  switch (which.kind) {
    case WhichParam::a: out.a += d; break;
    case WhichParam::b: out.b += d; break;
    case WhichParam::factor: out.factors.at(which.index).exponent += d; break;
  }
  return out;
}

void require_above(double v, const char* name) {
  if (!(v > -1.0)) {
    std::ostringstream os;
    os << "parameter " << name << " would become " << v << " (must stay above -1)";
    throw Error(ErrorKind::domain_mismatch, os.str());
  }
}

}  // namespace

BandedMatrix embedding(const WeightSpec& weight, WhichParam which, bool adjoint, int rows, int cols) {
  weight.validate();
  const Polynomial factor = param_factor(weight, which);
  const int deg = factor.degree();
  const WeightSpec codom_w = shift_param(weight, which, adjoint ? -1.0 : 1.0);
  require_above(codom_w.a, "a");
  require_above(codom_w.b, "b");
  if (which.kind == WhichParam::factor) require_above(codom_w.factors[which.index].exponent, "c");
  const int nq = entries_quadrature_size(rows, cols, adjoint ? deg : 0);
  const Recurrence dom = recurrence_for_weight(weight, std::max(cols, 1));
  const Recurrence codom = recurrence_for_weight(codom_w, std::max(nq, rows));
  const auto action = adjoint ? FirstOrderAction::multiply(factor) : FirstOrderAction::identity();
  const std::pair<int, int> band = adjoint ? std::pair{deg, 0} : std::pair{0, deg};
  return operator_entries(action, dom, codom, rows, cols, band);
}

FirstOrderAction differential_action(const WeightSpec& weight, int da, int db, const std::vector<int>& dc_in) {
  if (std::abs(da) != 1 || std::abs(db) != 1) throw Error(ErrorKind::domain_mismatch, "delta_a, delta_b must be +-1");
  std::vector<int> dc = dc_in;
  if (dc.empty()) dc.assign(weight.factors.size(), +1);
  if (dc.size() != weight.factors.size())
    throw Error(ErrorKind::domain_mismatch, "delta_c length must match the factor count");
  const Polynomial one = Polynomial::constant(1.0);
  const Polynomial zp1 = Polynomial::linear(1.0, 1.0), zm1 = Polynomial::linear(-1.0, 1.0);
  Polynomial a1, a0;
  if (da > 0 && db > 0) {
    a1 = one;
  } else if (da > 0) {
    a1 = zp1;
    a0 = Polynomial::constant(weight.b);
  } else if (db > 0) {
    a1 = zm1;
    a0 = Polynomial::constant(-weight.a);
  } else {
    a1 = zm1 * zp1;
    a0 = zp1 * (-weight.a) + zm1 * weight.b;
  }
  Polynomial rho = one, drho;
  std::vector<int> tuple;
  for (std::size_t i = 0; i < dc.size(); ++i) {
    if (std::abs(dc[i]) != 1) throw Error(ErrorKind::domain_mismatch, "delta_c entries must be +-1");
    if (dc[i] < 0) tuple.push_back(static_cast<int>(i));
  }
  for (int i : tuple) rho = rho * weight.factors[i].poly;
  for (int i : tuple) {
    Polynomial term = weight.factors[i].poly.derivative() * weight.factors[i].exponent;
    for (int j : tuple)
      if (j != i) term = term * weight.factors[j].poly;
    drho += term;
  }
  return {rho * a0 + drho * a1, rho * a1};
}

BandedMatrix differential(const WeightSpec& weight, int da, int db, const std::vector<int>& dc_in, int rows, int cols) {
  weight.validate();
  std::vector<int> dc = dc_in;
  if (dc.empty()) dc.assign(weight.factors.size(), +1);
  const FirstOrderAction action = differential_action(weight, da, db, dc);
  WeightSpec codom_w = weight;
  codom_w.a += da;
  codom_w.b += db;
  int u_low = (da < 0) + (db < 0), u_up = (da > 0) + (db > 0);
  for (std::size_t i = 0; i < dc.size(); ++i) {
    codom_w.factors[i].exponent += dc[i];
    require_above(codom_w.factors[i].exponent, "c");
    (dc[i] < 0 ? u_low : u_up) += weight.factors[i].poly.degree();
  }
  require_above(codom_w.a, "a");
  require_above(codom_w.b, "b");
  const int nq = entries_quadrature_size(rows, cols, action.degree());
  const Recurrence dom = recurrence_for_weight(weight, std::max(cols, 1));
  const Recurrence codom = recurrence_for_weight(codom_w, std::max(nq, rows));
  return operator_entries(action, dom, codom, rows, cols, std::pair{u_low - 1, u_up - 1});
}

}  // namespace gyro::polyalg
