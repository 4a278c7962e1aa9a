#pragma once

#include <complex>
#include <vector>

namespace gyro::polyalg {

/// Real polynomial in the monomial basis, c[0] + c[1] t + ... .
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double value);
  static Polynomial linear(double slope, double intercept);
  static Polynomial monomial(int degree, double coeff = 1.0);

  const std::vector<double>& coeffs() const { return c_; }
  /// Degree of the trimmed polynomial; the zero polynomial reports 0.
  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  double coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : 0.0; }

  double operator()(double t) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial derivative() const;
  Polynomial pow(int n) const;
  /// this(inner(t))
  Polynomial compose(const Polynomial& inner) const;
  /// Companion-matrix roots, polished by Newton steps.
  std::vector<std::complex<double>> roots() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace gyro::polyalg
