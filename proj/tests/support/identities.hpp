#pragma once

// Residuals of the vector-calculus identities on assembled matrices.

#include <algorithm>

#include "gyro/ops3d/operators.hpp"

namespace identity {

using namespace gyro::ops3d;

struct Residuals {
  double curl_grad = 0, div_curl = 0, div_grad = 0, vector_laplacian = 0;
  /// Largest entry among the composed product terms before they are summed.
  double term_scale = 0;
  double worst() const { return std::max({curl_grad, div_curl, div_grad, vector_laplacian}); }
};

inline double term_scale(const SpinOperator& op) {
  double s = 0;
  for (const auto& t : op.terms) s = std::max(s, std::abs(t.coeff) * t.op.max_abs());
  return s;
}

inline Residuals measure(const BasisSpec& scalar) {
  const BasisSpec up = scalar.with_alpha(scalar.alpha + 1);
  const SpinOperator grad = gradient(scalar), div = divergence(scalar), cu = curl(scalar);
  const SpinOperator cg = curl(up) * grad, dc = divergence(up) * cu, dg = divergence(up) * grad;
  const SpinOperator gd = gradient(up) * div, cc = curl(up) * cu;
  Residuals r;
  r.curl_grad = max_abs(cg.to_sparse());
  r.div_curl = max_abs(dc.to_sparse());
  r.div_grad = max_abs(SparseC(dg.to_sparse() - scalar_laplacian(scalar).to_sparse()));
  r.vector_laplacian = max_abs(SparseC(gd.to_sparse() - cc.to_sparse() - vector_laplacian(scalar).to_sparse()));
  r.term_scale = std::max({term_scale(cg), term_scale(dc), term_scale(dg), term_scale(gd), term_scale(cc)});
  return r;
}

}  // namespace identity
