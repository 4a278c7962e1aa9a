#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>

#include "gyro/basis3d/basis.hpp"
#include "gyro/exec.hpp"

namespace gyro::basis3d {

/// Triangularly truncated (l, k) coefficients of one azimuthal mode, k fastest.
struct CoefficientTensor {
  int m = 0;
  double alpha = 0.0;
  int sigma = 0;
  Truncation trunc;
  Eigen::VectorXcd values;

  static CoefficientTensor zeros(const BasisSpec& spec);
  std::complex<double>& at(int l, int k);
  std::complex<double> at(int l, int k) const;
};

/// Tensor grid: radial Gauss nodes of the level-0 weight times vertical Gauss-Jacobi(alpha, alpha) nodes.
struct Grid {
  Eigen::VectorXd t, v;
  Eigen::VectorXd wt, wv;
};

/// Radial N + ceil(D L / 2) + 2 nodes, vertical L + 2 nodes.
Grid analysis_grid(const BasisSpec& spec);

struct GridField {
  Grid grid;
  Eigen::MatrixXcd values;  ///< (t index, v index)
};

/// Field values at the tensor points t x v, azimuthal phase omitted.
Eigen::MatrixXcd synthesize_at(const BasisSpec& spec, const Eigen::VectorXcd& coeffs, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& v, Exec exec = Exec::parallel);
GridField synthesize(const BasisSpec& spec, const CoefficientTensor& coeffs, Exec exec = Exec::parallel);
/// Needs a field sampled on analysis_grid(spec).
CoefficientTensor analyze(const BasisSpec& spec, const GridField& field, Exec exec = Exec::parallel);

nlohmann::json to_json(const CoefficientTensor& c);
/// Columns m,l,k,re,im; k fastest, then l.
std::string to_csv(const CoefficientTensor& c);

}  // namespace gyro::basis3d
