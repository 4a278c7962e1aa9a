#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "gyro/polyalg/weight.hpp"

namespace gyro::polyalg {

/// Rectangular banded matrix. Offsets are col - row; stored entries satisfy
/// -lower <= col - row <= upper. Either bound may be negative for shifted bands.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int rows, int cols, int lower, int upper);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }
  /// Number of stored diagonals.
  int bandwidth() const { return std::max(lower_ + upper_ + 1, 0); }

  bool in_band(int r, int c) const { return c - r >= -lower_ && c - r <= upper_; }
  double operator()(int r, int c) const;
  /// Throws range when (r, c) is outside the band.
  double& at(int r, int c);

  Eigen::MatrixXd to_dense() const;
  /// Tightest band holding every entry with |v| > rel_threshold * max|v|; smaller entries are dropped.
  static BandedMatrix from_dense(const Eigen::MatrixXd& m, double rel_threshold = 1e-14);
  /// Band actually occupied by nonzero entries, as (lower, upper).
  std::pair<int, int> measured_band() const;
  double max_abs() const;

  BandedMatrix transpose() const;
  BandedMatrix operator*(const BandedMatrix& o) const;
  BandedMatrix operator+(const BandedMatrix& o) const;
  BandedMatrix scaled(double s) const;
  /// Copy with rows/cols clipped or zero-padded.
  BandedMatrix resized(int rows, int cols) const;

  std::optional<WeightSpec> domain;
  std::optional<WeightSpec> codomain;

 private:
  int rows_ = 0, cols_ = 0, lower_ = 0, upper_ = -1;
  std::vector<double> data_;
  int width() const { return bandwidth(); }
};

}  // namespace gyro::polyalg
