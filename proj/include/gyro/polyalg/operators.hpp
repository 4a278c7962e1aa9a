#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "gyro/polyalg/banded.hpp"
#include "gyro/polyalg/recurrence.hpp"

namespace gyro::polyalg {

/// f -> c1(z) f'(z) + c0(z) f(z).
struct FirstOrderAction {
  Polynomial c0;
  Polynomial c1;

  static FirstOrderAction identity() { return {Polynomial::constant(1.0), {}}; }
  static FirstOrderAction multiply(const Polynomial& p) { return {p, {}}; }
  static FirstOrderAction derivative() { return {{}, Polynomial::constant(1.0)}; }

  /// Degree raise of the action on polynomials.
  int degree() const;
  FirstOrderAction operator*(const Polynomial& p) const { return {c0 * p, c1 * p}; }
  FirstOrderAction operator+(const FirstOrderAction& o) const { return {c0 + o.c0, c1 + o.c1}; }
  FirstOrderAction scaled(double s) const { return {c0 * s, c1 * s}; }
};

/// Gauss nodes needed for exact entries of a rows x cols operator of the given degree.
int entries_quadrature_size(int rows, int cols, int action_degree);

/// L_{j,n} = <action P_n, Q_j>_codomain by codomain Gauss quadrature; entries below
/// 1e-14 max|L| dropped. With a declared band, entries outside it must be negligible.
BandedMatrix operator_entries(const FirstOrderAction& action, const Recurrence& dom, const Recurrence& codom,
                              int rows, int cols, std::optional<std::pair<int, int>> declared_band = std::nullopt);

/// Parameter selector for embeddings: a, b, or factor index.
struct WhichParam {
  enum Kind { a, b, factor } kind = a;
  int index = 0;
  static WhichParam jacobi_a() { return {a, 0}; }
  static WhichParam jacobi_b() { return {b, 0}; }
  static WhichParam augmenting(int i) { return {factor, i}; }
};

/// Identity embedding into the raised space, or (adjoint) multiplication by the factor
/// into the lowered space. `weight` is the domain weight.
BandedMatrix embedding(const WeightSpec& weight, WhichParam which, bool adjoint, int rows, int cols);

/// D(da, db, dc) from `weight` into the shifted weight.
BandedMatrix differential(const WeightSpec& weight, int delta_a, int delta_b, const std::vector<int>& delta_c,
                          int rows, int cols);

/// The first-order action of D(da, db, dc) on the domain weight.
FirstOrderAction differential_action(const WeightSpec& weight, int delta_a, int delta_b, const std::vector<int>& delta_c);

}  // namespace gyro::polyalg
