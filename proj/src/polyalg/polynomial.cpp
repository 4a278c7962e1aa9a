#include "gyro/polyalg/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace gyro::polyalg {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(double value) { return Polynomial({value}); }

Polynomial Polynomial::linear(double slope, double intercept) {
  return Polynomial({intercept, slope});
}

Polynomial Polynomial::monomial(int degree, double coeff) {
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(int n) const {
  Polynomial out = constant(1.0);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
  Polynomial acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& v : c_) v *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

std::vector<std::complex<double>> Polynomial::roots() const {
  const int n = degree();
  std::vector<std::complex<double>> r;
  if (n < 1) return r;
  if (n == 1) {
    r.emplace_back(-c_[0] / c_[1], 0.0);
    return r;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c_[i] / c_[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const Polynomial d = derivative();
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> dz = d(z);
      if (std::abs(dz) == 0.0) break;
      z -= (*this)(z) / dz;
    }
    r.push_back(z);
  }
  std::sort(r.begin(), r.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return r;
}

}  // namespace gyro::polyalg
