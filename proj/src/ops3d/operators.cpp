#include "gyro/ops3d/operators.hpp"

#include <cmath>
#include <sstream>

#include "gyro/error.hpp"
#include "gyro/polyalg/quadrature.hpp"

namespace gyro::ops3d {

using polyalg::FirstOrderAction;
using polyalg::Polynomial;

namespace {

constexpr double kVerticalZero = 1e-14;
constexpr double kVerticalLeak = 1e-13;

int ceil_half(int x) { return (x + 1) / 2; }

// Highest output degree of action applied to polynomials of degree <= n - 1.
int output_degree(const FirstOrderAction& a, int n) {
  int d = -1;
  if (!a.c0.is_zero()) d = std::max(d, a.c0.degree() + n - 1);
  if (!a.c1.is_zero()) d = std::max(d, a.c1.degree() + n - 2);
  return d;
}

}  // namespace

Eigen::MatrixXd vertical_matrix(VerticalOp op, double alpha_in, double alpha_out, int L_in, int L_out) {
  if (L_in <= 0 || L_out <= 0) return Eigen::MatrixXd::Zero(std::max(L_out, 0), std::max(L_in, 0));
  const int nq = std::max(L_in, L_out) + 3;
  const auto lo = polyalg::classical_jacobi_recurrence(alpha_in, alpha_in, L_in + 1);
  const auto hi = polyalg::classical_jacobi_recurrence(alpha_out, alpha_out, nq + 1);
  const auto q = polyalg::gauss_quadrature(hi, nq);
  const Eigen::MatrixXd p = polyalg::evaluate(lo, q.nodes, L_in - 1);
  const Eigen::MatrixXd dp = polyalg::evaluate_derivative(lo, q.nodes, L_in - 1);
  Eigen::MatrixXd f(L_in, nq);
  for (int l = 0; l < L_in; ++l)
    for (int j = 0; j < nq; ++j) {
      const double v = q.nodes[j];
      switch (op) {
        case VerticalOp::identity: f(l, j) = p(l, j); break;
        case VerticalOp::derivative: f(l, j) = dp(l, j); break;
        case VerticalOp::euler: f(l, j) = l * p(l, j) - v * dp(l, j); break;
        case VerticalOp::euler_half: f(l, j) = l * p(l, j) - (1 + v) * dp(l, j); break;
        case VerticalOp::mul_v: f(l, j) = v * p(l, j); break;
        case VerticalOp::mul_half_z: f(l, j) = 0.5 * (1 + v) * p(l, j); break;
        case VerticalOp::mul_boundary: f(l, j) = (1 - v * v) * p(l, j); break;
      }
    }
  const Eigen::MatrixXd pout = polyalg::evaluate(hi, q.nodes, L_out - 1);
  Eigen::MatrixXd V = pout * q.weights.asDiagonal() * f.transpose();
  const double scale = V.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < V.size(); ++i)
    if (std::abs(V.data()[i]) <= kVerticalZero * scale) V.data()[i] = 0.0;
  return V;
}

BlockOperator assemble_terms(const BasisSpec& source, const BasisSpec& target, const std::vector<Term>& terms,
                             ClosurePolicy policy, Exec exec) {
  source.validate();
  target.validate();
  const auto ts = build_hierarchy(source);
  const auto tt = build_hierarchy(target);
  const auto trs = source.truncation(), trt = target.truncation();

  struct Task {
    int term, l_in, l_out;
    double v;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
    const int L_full = trs.L + 3;
    const Eigen::MatrixXd V = vertical_matrix(terms[i].vertical, source.alpha, target.alpha, trs.L, std::max(L_full, trt.L));
    const double vmax = V.cwiseAbs().maxCoeff();
    for (int lo = trt.L; lo < V.rows(); ++lo)
      for (int li = 0; li < trs.L; ++li)
        if (std::abs(V(lo, li)) > kVerticalLeak * vmax && trs.radial_size(li) > 0 && policy == ClosurePolicy::require) {
          std::ostringstream os;
          os << "vertical level " << lo << " produced from level " << li << " exceeds the target L = " << trt.L;
          throw Error(ErrorKind::closure, os.str());
        }
    for (int lo = 0; lo < trt.L; ++lo)
      for (int li = 0; li < trs.L; ++li)
        if (V(lo, li) != 0.0) tasks.push_back({i, li, lo, V(lo, li)});
  }

  std::vector<BandedMatrix> results(tasks.size());
  std::vector<std::string> errors(tasks.size());
  const auto& g = source.geometry;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int n = 0; n < static_cast<int>(tasks.size()); ++n) {
    const Task& tk = tasks[n];
    const Term& term = terms[tk.term];
    const int rows = trt.radial_size(tk.l_out), cols = trs.radial_size(tk.l_in);
    if (rows == 0 || cols == 0) continue;
    try {
      const Polynomial M = basis3d::height_power(g, tk.l_in + term.height_shift - tk.l_out);
      const FirstOrderAction action = term.radial * M;
      if (policy == ClosurePolicy::require && output_degree(action, cols) > rows - 1) {
        std::ostringstream os;
        os << "radial degree " << output_degree(action, cols) << " at level " << tk.l_out << " (from level " << tk.l_in
           << ") exceeds the target size " << rows;
        throw Error(ErrorKind::closure, os.str());
      }
      results[n] = polyalg::operator_entries(action, ts->level(tk.l_in).rec, tt->level(tk.l_out).rec, rows, cols)
                       .scaled(tk.v * term.scale);
    } catch (const Error& e) {
      errors[n] = std::string(to_string(e.kind())) + "\n" + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) {
      const auto cut = e.find('\n');
      const std::string kind = e.substr(0, cut);
      throw Error(kind == "closure" ? ErrorKind::closure : ErrorKind::assembly, e.substr(cut + 1));
    }

  BlockOperator out(source, target);
  for (std::size_t n = 0; n < tasks.size(); ++n)
    if (results[n].rows() > 0 && results[n].cols() > 0) out.add_block(tasks[n].l_out, tasks[n].l_in, results[n]);
  return out;
}

BlockOperator fundamental(const BasisSpec& spec, int delta, Scaling scaling, Exec exec) {
  if (delta < -1 || delta > 1) throw Error(ErrorKind::range, "delta must be -1, 0 or +1");
  const auto& g = spec.geometry;
  const BasisSpec target = spec.with_alpha(spec.alpha + 1).with_sigma(spec.sigma + delta);
  const bool physical = scaling == Scaling::physical;
  if (delta == 0) {
    const double k = physical && g.is_half() ? 2.0 : 1.0;
    return assemble_terms(spec, target, {{VerticalOp::derivative, FirstOrderAction::identity(), -1, k}},
                          ClosurePolicy::require, exec);
  }
  const int b = spec.regularity();
  const bool raising = target.regularity() > b;
  const Polynomial rho = g.rho();
  const double k = physical ? 2.0 * std::sqrt(g.rho_scale()) / g.delta() : 1.0;
  std::vector<Term> terms;
  const FirstOrderAction a1 = raising ? FirstOrderAction{Polynomial(), Polynomial::constant(1.0)}
                                      : FirstOrderAction{rho.derivative() * static_cast<double>(b), rho};
  terms.push_back({VerticalOp::identity, a1, 0, k});
  const Polynomial carry = raising ? Polynomial::constant(1.0) : rho;
  if (g.is_half()) {
    const Polynomial dh = g.h_polynomial().derivative();
    if (!dh.is_zero()) terms.push_back({VerticalOp::euler_half, FirstOrderAction::multiply(dh * carry), -1, k});
  } else {
    const Polynomial dh2 = g.h_squared().derivative() * 0.5;
    if (!dh2.is_zero()) terms.push_back({VerticalOp::euler, FirstOrderAction::multiply(dh2 * carry), -2, k});
  }
  return assemble_terms(spec, target, terms, ClosurePolicy::require, exec);
}

BlockOperator conversion(const BasisSpec& spec, ClosurePolicy policy, Exec exec) {
  return assemble_terms(spec, spec.with_alpha(spec.alpha + 1), {{VerticalOp::identity, FirstOrderAction::identity(), 0, 1.0}},
                        policy, exec);
}

BasisSpec adjoint_target(const BasisSpec& spec) {
  const auto& g = spec.geometry;
  return spec.with_alpha(spec.alpha - 1)
      .with_size(spec.L_max + 2, spec.N_max + g.boundary_radial_factor().degree() + g.height_sq_degree());
}

BlockOperator conversion_adjoint(const BasisSpec& spec, Exec exec) {
  if (!(spec.alpha - 1 > -1.0))
    throw Error(ErrorKind::domain_mismatch, "adjoint conversion needs alpha > 0 so that alpha - 1 > -1");
  return assemble_terms(spec, adjoint_target(spec),
                        {{VerticalOp::mul_boundary, FirstOrderAction::multiply(spec.geometry.boundary_radial_factor()), 2, 1.0}},
                        ClosurePolicy::require, exec);
}

BlockOperator s_multiply(const BasisSpec& spec, int target_sigma, Exec exec) {
  if (std::abs(target_sigma - spec.sigma) != 1) throw Error(ErrorKind::domain_mismatch, "s multiplication shifts spin by one");
  const auto& g = spec.geometry;
  const BasisSpec target = spec.with_sigma(target_sigma).with_size(spec.L_max, spec.N_max + 1);
  const bool raising = target.regularity() > spec.regularity();
  const Polynomial c0 = raising ? Polynomial::constant(1.0) : g.rho();
  return assemble_terms(spec, target,
                        {{VerticalOp::identity, FirstOrderAction::multiply(c0), 0, 0.5 * std::sqrt(g.rho_scale())}},
                        ClosurePolicy::require, exec);
}

BlockOperator z_multiply(const BasisSpec& spec, Exec exec) {
  const auto& g = spec.geometry;
  const BasisSpec target = spec.with_size(spec.L_max + 1, spec.N_max + ceil_half(g.height_sq_degree()));
  const VerticalOp op = g.is_half() ? VerticalOp::mul_half_z : VerticalOp::mul_v;
  return assemble_terms(spec, target, {{op, FirstOrderAction::identity(), 1, 1.0}}, ClosurePolicy::require, exec);
}

namespace {

constexpr cd I{0.0, 1.0};

SpinOperator term(const BasisSpec& spec, int sigma_in, int delta, cd coeff) {
  return SpinOperator::single(fundamental(spec.with_sigma(sigma_in), delta), sigma_in + delta, sigma_in, coeff);
}

SpinOperator with_spins(SpinOperator op, std::vector<int> in, std::vector<int> out) {
  op.spins_in = std::move(in);
  op.spins_out = std::move(out);
  return op;
}

}  // namespace

SpinOperator gradient(const BasisSpec& spec) {
  return with_spins(term(spec, 0, +1, 1.0) + term(spec, 0, -1, 1.0) + term(spec, 0, 0, 1.0), {0}, vector_spins());
}

SpinOperator divergence(const BasisSpec& spec) {
  return with_spins(term(spec, +1, -1, 1.0) + term(spec, -1, +1, 1.0) + term(spec, 0, 0, 1.0), vector_spins(), {0});
}

SpinOperator curl(const BasisSpec& spec) {
  SpinOperator c = term(spec, +1, 0, I) + term(spec, +1, -1, -I) + term(spec, -1, +1, I) + term(spec, -1, 0, -I) +
                   term(spec, 0, +1, -I) + term(spec, 0, -1, I);
  return with_spins(c, vector_spins(), vector_spins());
}

SpinOperator scalar_laplacian(const BasisSpec& spec) {
  const BasisSpec s0 = spec.with_sigma(0);
  const BasisSpec up = s0.with_alpha(s0.alpha + 1);
  const BlockOperator lap =
      (fundamental(up.with_sigma(+1), -1) * fundamental(s0, +1)).scaled(2.0) + fundamental(up, 0) * fundamental(s0, 0);
  return SpinOperator::single(lap, 0, 0);
}

BlockOperator spin_laplacian(const BasisSpec& spec) {
  const int sg = spec.sigma;
  const BasisSpec up = spec.with_alpha(spec.alpha + 1);
  return fundamental(up.with_sigma(sg + 1), -1) * fundamental(spec, +1) +
         fundamental(up.with_sigma(sg - 1), +1) * fundamental(spec, -1) + fundamental(up, 0) * fundamental(spec, 0);
}

SpinOperator vector_laplacian(const BasisSpec& spec) {
  SpinOperator out;
  out.spins_in = vector_spins();
  out.spins_out = vector_spins();
  for (int sg : vector_spins()) out.terms.push_back({sg, sg, 1.0, spin_laplacian(spec.with_sigma(sg))});
  return out;
}

SpinOperator coordinate_multiply(const BasisSpec& spec, Coordinate which, ProductMode mode) {
  const BasisSpec s0 = spec.with_sigma(0);
  if (which == Coordinate::s_vec) {
    if (mode == ProductMode::multiply)
      return with_spins(SpinOperator::single(s_multiply(s0, +1), +1, 0) + SpinOperator::single(s_multiply(s0, -1), -1, 0),
                        {0}, {+1, -1});
    return with_spins(SpinOperator::single(s_multiply(spec.with_sigma(+1), 0), 0, +1) +
                          SpinOperator::single(s_multiply(spec.with_sigma(-1), 0), 0, -1),
                      {+1, -1}, {0});
  }
  return SpinOperator::single(z_multiply(s0), 0, 0);
}

}  // namespace gyro::ops3d
