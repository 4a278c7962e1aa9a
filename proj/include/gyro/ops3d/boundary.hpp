#pragma once

#include "gyro/ops3d/block_operator.hpp"

namespace gyro::ops3d {

using basis3d::Truncation;
using geometry::Geometry;

/// Evaluation at constant t = t0: row l gives the coefficient of P_l(v) in f(t0, v).
SparseR boundary_radial(const BasisSpec& spec, double t0);

/// Radial family shared by every level in boundary_vertical.
struct VerticalTrace {
  SparseR rows;                  ///< trace coefficients from the full coefficient vector
  polyalg::Recurrence family;    ///< f(t, v0) = R(t) sum_r d_r Q_r(t)
};

/// Evaluation at constant v = v0, expanded in the top-level radial family (needs polynomial h).
VerticalTrace boundary_vertical(const BasisSpec& spec, double v0);

enum class TauFlavor { conversion, double_conversion, identity };

/// Default number of sliced radial modes per level: 1 on a cylinder, 2 on an annulus.
int default_tau_radial(const Geometry& g);

/// Positions (l, k) sliced by the tau columns: the last n_radial k per level below the top
/// n_vertical levels, and every k of the top n_vertical levels.
std::vector<std::pair<int, int>> tau_positions(const Truncation& tr, int n_radial, int n_vertical = 2);

/// Tau columns in the row space of spec: conversion from alpha - 1 (or two conversions from
/// alpha - 2, or the identity) at the sliced positions. Columns follow tau_positions order.
SparseR tau_projection(const BasisSpec& spec, TauFlavor flavor, int n_radial, int n_vertical = 2);

}  // namespace gyro::ops3d
