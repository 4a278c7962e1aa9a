#pragma once

#include <vector>

#include "gyro/eigen/system.hpp"

namespace gyro::eigen {

struct SolveOptions {
  cd shift{0.0, 0.0};
  int n_modes = 1;
  int krylov_dim = 40;
  int max_restarts = 20;
  double tol = 1e-8;
  unsigned seed = 1234;
};

struct EigenPair {
  cd lambda;
  Eigen::VectorXcd x;
  /// ||(L - lambda M) x|| / (||L||_inf ||x||)
  double residual = 0;
  bool converged = false;
};

struct EigenSolution {
  std::vector<EigenPair> modes;  ///< nearest the shift first
  int restarts = 0;
  int operator_applications = 0;
  /// Converged modes with Re(lambda) > 0, excluded from modes.
  int spurious = 0;
  /// Fewer than n_modes pairs met the tolerance.
  bool partial = false;
};

/// Relative residual of a candidate pair.
double relative_residual(const SystemAssembly& sys, cd lambda, const Eigen::VectorXcd& x);

/// Shift-invert Arnoldi with a single dense LU of (L - shift M).
EigenSolution solve_targeted(const SystemAssembly& sys, const SolveOptions& opt);

/// Every finite eigenvalue by dense shift-invert; for small truncations only.
std::vector<cd> dense_spectrum(const SystemAssembly& sys, cd shift);

/// Eigenvalues present in both lists to within rel_tol (relative), taken from the finer list.
std::vector<cd> stable_eigenvalues(const std::vector<cd>& coarse, const std::vector<cd>& fine, double rel_tol = 1e-3);

/// Least-damped eigenvalue with Re < 0 and |lambda| <= radius from a dense spectrum; a starting shift.
cd fundamental_seed(const SystemAssembly& sys, double radius = 4.0);

/// Converged mode with the largest real part among the solve's modes near opt.shift.
/// Throws numerical when no mode meets the tolerance.
EigenPair fundamental_mode(const SystemAssembly& sys, const SolveOptions& opt, EigenSolution* record = nullptr);

}  // namespace gyro::eigen
