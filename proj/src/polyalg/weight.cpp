#include "gyro/polyalg/weight.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gyro/error.hpp"

namespace gyro::polyalg {

namespace {
constexpr double kPositivityFloor = 1e-12;
constexpr double kRealRootTol = 1e-10;
constexpr int kProbePoints = 64;
}  // namespace

std::vector<double> positivity_probe_points() {
  std::vector<double> pts;
  pts.reserve(kProbePoints + 2);
  pts.push_back(-1.0);
  for (int j = 0; j < kProbePoints; ++j)
    pts.push_back(-std::cos(std::numbers::pi * (j + 0.5) / kProbePoints));
  pts.push_back(1.0);
  return pts;
}

void WeightSpec::validate() const {
  if (!(a > -1.0) || !(b > -1.0)) {
    std::ostringstream os;
    os << "Jacobi parameters must exceed -1 (a=" << a << ", b=" << b << ")";
    throw Error(ErrorKind::invalid_weight, os.str());
  }
  const auto pts = positivity_probe_points();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].poly.is_zero())
      throw Error(ErrorKind::invalid_weight, "factor " + std::to_string(i) + " is the zero polynomial");
    double lo = INFINITY;
    for (double z : pts) lo = std::min(lo, factors[i].poly(z));
    if (!(lo > kPositivityFloor)) {
      std::ostringstream os;
      os << "factor " << i << " is not strictly positive on [-1,1] (min " << lo << ")";
      throw Error(ErrorKind::invalid_weight, os.str());
    }
  }
}

double WeightSpec::operator()(double z) const {
  double w = std::pow(1.0 - z, a) * std::pow(1.0 + z, b);
  for (const auto& f : factors) w *= std::pow(f.poly(z), f.exponent);
  return w;
}

bool WeightSpec::has_fractional_exponent() const {
  for (const auto& f : factors)
    if (f.exponent != std::floor(f.exponent) && !f.poly.is_constant()) return true;
  return false;
}

WeightSpec WeightSpec::shifted(double da, double db, const std::vector<double>& dc) const {
  WeightSpec w = *this;
  w.a += da;
  w.b += db;
  for (std::size_t i = 0; i < dc.size() && i < w.factors.size(); ++i) w.factors[i].exponent += dc[i];
  return w;
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << a << ", b=" << b;
  for (const auto& f : factors) {
    os << ", [";
    for (std::size_t k = 0; k < f.poly.coeffs().size(); ++k) os << (k ? " " : "") << f.poly.coeffs()[k];
    os << "]^" << f.exponent;
  }
  os << ")";
  return os.str();
}

void LinearFactor::validate() const {
  if (slope == 0.0) throw Error(ErrorKind::invalid_factor, "linear factor has zero slope");
  const double r = z0();
  if (r > -1.0 && r < 1.0) {
    std::ostringstream os;
    os << "linear factor root " << r << " lies inside (-1,1)";
    throw Error(ErrorKind::invalid_factor, os.str());
  }
}

Polynomial QuadraticFactor::monic() const {
  return Polynomial({std::norm(root), -2.0 * root.real(), 1.0});
}

void QuadraticFactor::validate() const {
  if (root.imag() == 0.0) throw Error(ErrorKind::invalid_factor, "quadratic factor root is real");
}

Factorization factorize(const Polynomial& p) {
  Factorization out;
  if (p.is_zero()) throw Error(ErrorKind::invalid_weight, "cannot factor the zero polynomial");
  Polynomial rebuilt = Polynomial::constant(1.0);
  for (const auto& r : p.roots()) {
    if (std::abs(r.imag()) <= kRealRootTol * (1.0 + std::abs(r))) {
      const double x = r.real();
      if (x >= -1.0 && x <= 1.0) {
        std::ostringstream os;
        os << "factor has a real root " << x << " inside [-1,1]";
        throw Error(ErrorKind::invalid_weight, os.str());
      }
      // Orient so the factor is positive on the interval.
      LinearFactor lf = x < -1.0 ? LinearFactor{1.0, -x} : LinearFactor{-1.0, x};
      out.linear.push_back(lf);
      rebuilt = rebuilt * Polynomial::linear(lf.slope, lf.intercept);
    } else if (r.imag() > 0.0) {
      QuadraticFactor qf{r};
      out.quadratic.push_back(qf);
      rebuilt = rebuilt * qf.monic();
    }
  }
  // Probe at an interior point where every piece is positive.
  out.scale = p(0.0) / rebuilt(0.0);
  if (!(out.scale > 0.0)) throw Error(ErrorKind::invalid_weight, "factor is negative on [-1,1]");
  return out;
}

}  // namespace gyro::polyalg
