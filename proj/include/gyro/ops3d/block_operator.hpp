#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <map>
#include <vector>

#include "gyro/basis3d/basis.hpp"
#include "gyro/polyalg/banded.hpp"

namespace gyro::ops3d {

using basis3d::BasisSpec;
using polyalg::BandedMatrix;
using cd = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cd>;
using SparseR = Eigen::SparseMatrix<double>;

/// Radial matrix coupling vertical level l_in of the source to l_out of the target.
struct Block {
  int l_out = 0;
  int l_in = 0;
  BandedMatrix radial;
  int delta_l() const { return l_out - l_in; }
};

/// Operator between two bases stored as per-level radial blocks.
class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(BasisSpec source, BasisSpec target);

  const BasisSpec& source() const { return source_; }
  const BasisSpec& target() const { return target_; }
  std::vector<Block> blocks() const;
  /// Accumulates into an existing (l_out, l_in) block.
  void add_block(int l_out, int l_in, const BandedMatrix& m);

  /// rows = target size, cols = source size, k fastest then l.
  SparseR to_sparse() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  /// this after rhs; rhs.target must be the space of this->source.
  BlockOperator operator*(const BlockOperator& rhs) const;
  BlockOperator operator+(const BlockOperator& o) const;
  BlockOperator operator-(const BlockOperator& o) const { return *this + o.scaled(-1.0); }
  BlockOperator scaled(double s) const;
  /// Same operator with a larger target truncation (zero rows appended per level).
  BlockOperator with_target(const BasisSpec& bigger) const;
  double max_abs() const;

 private:
  BasisSpec source_, target_;
  std::map<std::pair<int, int>, BandedMatrix> blocks_;
};

struct SpinTerm {
  int sigma_out = 0;
  int sigma_in = 0;
  cd coeff{1.0, 0.0};
  BlockOperator op;
};

/// Operator between spin-component stacks; blocks ordered by the listed spins.
struct SpinOperator {
  std::vector<int> spins_in;
  std::vector<int> spins_out;
  std::vector<SpinTerm> terms;

  static SpinOperator single(const BlockOperator& op, int sigma_out, int sigma_in, cd coeff = 1.0);
  /// Size of each spin block on either side, taken from the terms.
  int in_size(int sigma) const;
  int out_size(int sigma) const;
  SparseC to_sparse() const;
  SpinOperator operator*(const SpinOperator& rhs) const;
  SpinOperator operator+(const SpinOperator& o) const;
  SpinOperator operator-(const SpinOperator& o) const;
  SpinOperator scaled(cd s) const;
};

/// Largest |entry| of a complex sparse matrix (0 when empty).
double max_abs(const SparseC& m);

}  // namespace gyro::ops3d
