#include "gyro/ops3d/boundary.hpp"

#include <cmath>

#include "gyro/error.hpp"
#include "gyro/ops3d/operators.hpp"
#include "gyro/polyalg/quadrature.hpp"

namespace gyro::ops3d {

SparseR boundary_radial(const BasisSpec& spec, double t0) {
  spec.validate();
  if (!(t0 >= -1.0 && t0 <= 1.0)) throw Error(ErrorKind::range, "t0 must lie in [-1, 1]");
  const auto table = basis3d::build_hierarchy(spec);
  const auto tr = spec.truncation();
  const double R = basis3d::radial_prefactor(spec, t0);
  const double h = spec.geometry.height_at(t0);
  std::vector<Eigen::Triplet<double>> trip;
  double hl = 1.0;
  Eigen::VectorXd at(1);
  at << t0;
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    if (n > 0) {
      const Eigen::MatrixXd q = polyalg::evaluate(table->level(l).rec, at, n - 1, Exec::serial);
      for (int k = 0; k < n; ++k)
        if (q(k, 0) * hl * R != 0.0) trip.emplace_back(l, tr.offset(l) + k, R * hl * q(k, 0));
    }
    hl *= h;
  }
  SparseR out(tr.L, tr.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

VerticalTrace boundary_vertical(const BasisSpec& spec, double v0) {
  spec.validate();
  if (!(v0 >= -1.0 && v0 <= 1.0)) throw Error(ErrorKind::range, "v0 must lie in [-1, 1]");
  const auto& g = spec.geometry;
  if (!g.height_is_polynomial())
    throw Error(ErrorKind::domain_mismatch, "vertical boundary evaluation needs a polynomial height");
  const auto table = basis3d::build_hierarchy(spec);
  const auto tr = spec.truncation();
  const int hd = g.h_polynomial().degree();
  int rows = 0;
  for (int l = 0; l < tr.L; ++l)
    if (tr.radial_size(l) > 0) rows = std::max(rows, tr.radial_size(l) + l * hd);
  VerticalTrace out;
  out.family = table->level(tr.L - 1).rec;

  const auto vert = polyalg::classical_jacobi_recurrence(spec.alpha, spec.alpha, tr.L + 1);
  Eigen::VectorXd at(1);
  at << v0;
  const Eigen::MatrixXd p = polyalg::evaluate(vert, at, tr.L - 1, Exec::serial);

  std::vector<Eigen::Triplet<double>> trip;
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    if (n == 0 || p(l, 0) == 0.0) continue;
    const auto m = polyalg::operator_entries(polyalg::FirstOrderAction::multiply(basis3d::height_power(g, l)),
                                             table->level(l).rec, out.family, rows, n);
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < n; ++k) {
        const double v = m(r, k);
        if (v != 0.0) trip.emplace_back(r, tr.offset(l) + k, v * p(l, 0));
      }
  }
  out.rows = SparseR(rows, tr.size());
  out.rows.setFromTriplets(trip.begin(), trip.end());
  return out;
}

int default_tau_radial(const Geometry& g) { return g.is_annulus() ? 2 : 1; }

std::vector<std::pair<int, int>> tau_positions(const Truncation& tr, int n_radial, int n_vertical) {
  std::vector<std::pair<int, int>> out;
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    const int first = l >= tr.L - n_vertical ? 0 : std::max(0, n - n_radial);
    for (int k = first; k < n; ++k) out.emplace_back(l, k);
  }
  return out;
}

SparseR tau_projection(const BasisSpec& spec, TauFlavor flavor, int n_radial, int n_vertical) {
  spec.validate();
  const auto tr = spec.truncation();
  const auto pos = tau_positions(tr, n_radial, n_vertical);
  SparseR full;
  switch (flavor) {
    case TauFlavor::identity: {
      full = SparseR(tr.size(), tr.size());
      full.setIdentity();
      break;
    }
    case TauFlavor::conversion: {
      if (!(spec.alpha - 1 > -1.0))
        throw Error(ErrorKind::domain_mismatch, "conversion tau needs alpha - 1 > -1");
      full = conversion(spec.with_alpha(spec.alpha - 1)).to_sparse();
      break;
    }
    case TauFlavor::double_conversion: {
      if (!(spec.alpha - 2 > -1.0))
        throw Error(ErrorKind::domain_mismatch, "double-conversion tau needs alpha - 2 > -1");
      const BasisSpec lo = spec.with_alpha(spec.alpha - 2);
      full = (conversion(lo.with_alpha(spec.alpha - 1)) * conversion(lo)).to_sparse();
      break;
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < static_cast<int>(pos.size()); ++j) {
    const int col = tr.offset(pos[j].first) + pos[j].second;
    for (SparseR::InnerIterator it(full, col); it; ++it) trip.emplace_back(it.row(), j, it.value());
  }
  SparseR out(tr.size(), static_cast<int>(pos.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace gyro::ops3d
