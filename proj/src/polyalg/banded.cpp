#include "gyro/polyalg/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gyro/error.hpp"

namespace gyro::polyalg {

BandedMatrix::BandedMatrix(int rows, int cols, int lower, int upper)
    : rows_(rows), cols_(cols), lower_(lower), upper_(upper) {
  data_.assign(static_cast<std::size_t>(rows_) * width(), 0.0);
}

double BandedMatrix::operator()(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_ || !in_band(r, c)) return 0.0;
  return data_[static_cast<std::size_t>(r) * width() + (c - r + lower_)];
}

double& BandedMatrix::at(int r, int c) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_ || !in_band(r, c)) {
    std::ostringstream os;
    os << "entry (" << r << "," << c << ") outside band [" << -lower_ << "," << upper_ << "]";
    throw Error(ErrorKind::range, os.str());
  }
  return data_[static_cast<std::size_t>(r) * width() + (c - r + lower_)];
}

Eigen::MatrixXd BandedMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = std::max(0, r - lower_); c <= std::min(cols_ - 1, r + upper_); ++c) m(r, c) = (*this)(r, c);
  return m;
}

BandedMatrix BandedMatrix::from_dense(const Eigen::MatrixXd& m, double rel_threshold) {
  const double cut = rel_threshold * (m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  int lo = std::numeric_limits<int>::min(), up = std::numeric_limits<int>::min();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > cut && m(r, c) != 0.0) {
        lo = std::max(lo, r - c);
        up = std::max(up, c - r);
      }
  if (lo == std::numeric_limits<int>::min()) return BandedMatrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), 0, -1);
  BandedMatrix b(static_cast<int>(m.rows()), static_cast<int>(m.cols()), lo, up);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (b.in_band(r, c) && std::abs(m(r, c)) > cut) b.at(r, c) = m(r, c);
  return b;
}

std::pair<int, int> BandedMatrix::measured_band() const {
  int lo = std::numeric_limits<int>::min(), up = std::numeric_limits<int>::min();
  for (int r = 0; r < rows_; ++r)
    for (int c = std::max(0, r - lower_); c <= std::min(cols_ - 1, r + upper_); ++c)
      if ((*this)(r, c) != 0.0) {
        lo = std::max(lo, r - c);
        up = std::max(up, c - r);
      }
  if (lo == std::numeric_limits<int>::min()) return {0, -1};
  return {lo, up};
}

double BandedMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix t(cols_, rows_, upper_, lower_);
  for (int r = 0; r < rows_; ++r)
    for (int c = std::max(0, r - lower_); c <= std::min(cols_ - 1, r + upper_); ++c) t.at(c, r) = (*this)(r, c);
  t.domain = codomain;
  t.codomain = domain;
  return t;
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::domain_mismatch, "banded product shape mismatch");
  BandedMatrix p(rows_, o.cols_, lower_ + o.lower_, upper_ + o.upper_);
  if (bandwidth() == 0 || o.bandwidth() == 0) return p;
  for (int r = 0; r < rows_; ++r)
    for (int k = std::max(0, r - lower_); k <= std::min(cols_ - 1, r + upper_); ++k) {
      const double v = (*this)(r, k);
      if (v == 0.0) continue;
      for (int c = std::max(0, k - o.lower_); c <= std::min(o.cols_ - 1, k + o.upper_); ++c) p.at(r, c) += v * o(k, c);
    }
  p.domain = o.domain;
  p.codomain = codomain;
  return p;
}

BandedMatrix BandedMatrix::operator+(const BandedMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::domain_mismatch, "banded sum shape mismatch");
  if (bandwidth() == 0) return o;
  if (o.bandwidth() == 0) return *this;
  BandedMatrix s(rows_, cols_, std::max(lower_, o.lower_), std::max(upper_, o.upper_));
  for (const BandedMatrix* m : {this, &o})
    for (int r = 0; r < rows_; ++r)
      for (int c = std::max(0, r - m->lower_); c <= std::min(cols_ - 1, r + m->upper_); ++c) s.at(r, c) += (*m)(r, c);
  s.domain = domain;
  s.codomain = codomain;
  return s;
}

BandedMatrix BandedMatrix::scaled(double s) const {
  BandedMatrix out = *this;
  for (double& v : out.data_) v *= s;
  return out;
}

BandedMatrix BandedMatrix::resized(int rows, int cols) const {
  BandedMatrix out(rows, cols, lower_, upper_);
  for (int r = 0; r < std::min(rows, rows_); ++r)
    for (int c = std::max(0, r - lower_); c <= std::min({cols - 1, cols_ - 1, r + upper_}); ++c) out.at(r, c) = (*this)(r, c);
  out.domain = domain;
  out.codomain = codomain;
  return out;
}

}  // namespace gyro::polyalg
