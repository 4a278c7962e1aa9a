#include "gyro/polyalg/recurrence.hpp"

#include <cmath>
#include <sstream>

#include "gyro/error.hpp"
#include "gyro/polyalg/quadrature.hpp"

namespace gyro::polyalg {

namespace {

void require_length(const Recurrence& base, int needed, const char* what) {
  if (base.size() < needed) {
    std::ostringstream os;
    os << what << ": base recurrence has " << base.size() << " terms, " << needed << " required";
    throw Error(ErrorKind::truncation, os.str());
  }
}

struct SplitFactor {
  Factorization pieces;
  int lifts = 0;          // integer part applied by Christoffel lifts
  double remainder = 0;   // exponent left for the base stage
};

std::vector<SplitFactor> split_factors(const WeightSpec& w, double& constant_scale) {
  std::vector<SplitFactor> out;
  constant_scale = 1.0;
  for (const auto& f : w.factors) {
    SplitFactor s;
    if (f.exponent == 0.0) {
      out.push_back(s);
      continue;
    }
    if (f.poly.is_constant()) {
      constant_scale *= std::pow(f.poly.coeff(0), f.exponent);
      out.push_back(s);
      continue;
    }
    s.pieces = factorize(f.poly);
    if (f.exponent > 0.0) {
      s.lifts = static_cast<int>(std::floor(f.exponent));
      s.remainder = f.exponent - s.lifts;
    } else {
      s.remainder = f.exponent;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

Recurrence Recurrence::truncated(int n_terms) const {
  require_length(*this, n_terms, "truncate");
  Recurrence r = *this;
  r.alpha.resize(n_terms);
  r.beta.resize(n_terms);
  return r;
}

Recurrence classical_jacobi_recurrence(double a, double b, int n_terms) {
  if (!(a > -1.0) || !(b > -1.0)) {
    std::ostringstream os;
    os << "classical Jacobi parameters must exceed -1 (a=" << a << ", b=" << b << ")";
    throw Error(ErrorKind::invalid_weight, os.str());
  }
  if (n_terms < 1) throw Error(ErrorKind::truncation, "n_terms must be at least 1");
  Recurrence r;
  r.alpha.resize(n_terms);
  r.beta.resize(n_terms);
  const double ab = a + b;
  for (int n = 0; n < n_terms; ++n) {
    const double s = 2.0 * n + ab;
    if (n == 0) {
      r.alpha[0] = (b - a) / (ab + 2.0);
      r.beta[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
    } else {
      r.alpha[n] = (b * b - a * a) / (s * (s + 2.0));
      r.beta[n] = std::sqrt(4.0 * (n + 1.0) * (n + a + 1.0) * (n + b + 1.0) * (n + ab + 1.0) /
                            ((s + 1.0) * (s + 2.0) * (s + 2.0) * (s + 3.0)));
    }
  }
  r.mass = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                    std::lgamma(ab + 2.0));
  r.weight = WeightSpec(a, b);
  return r;
}

Recurrence stieltjes_recurrence(const WeightSpec& weight, int n_terms, int proxy_nodes) {
  weight.validate();
  if (n_terms < 1) throw Error(ErrorKind::truncation, "n_terms must be at least 1");
  const int m = proxy_nodes > 0 ? proxy_nodes : std::max(4 * n_terms, 32);
  if (m <= n_terms) throw Error(ErrorKind::truncation, "proxy rule must have more nodes than requested terms");
  const QuadratureRule proxy = gauss_jacobi(weight.a, weight.b, m);
  Eigen::VectorXd w = proxy.weights;
  for (const auto& f : weight.factors)
    for (int j = 0; j < m; ++j) w(j) *= std::pow(f.poly(proxy.nodes(j)), f.exponent);

  Recurrence r;
  r.weight = weight;
  r.mass = w.sum();
  r.alpha.resize(n_terms);
  r.beta.resize(n_terms);
  // Lanczos on diag(nodes) with start vector sqrt(w); full reorthogonalization.
  Eigen::MatrixXd q(m, n_terms + 1);
  q.col(0) = w.cwiseSqrt() / std::sqrt(r.mass);
  for (int n = 0; n < n_terms; ++n) {
    Eigen::VectorXd v = proxy.nodes.cwiseProduct(q.col(n));
    r.alpha[n] = q.col(n).dot(v);
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k <= n; ++k) v -= q.col(k).dot(v) * q.col(k);
    r.beta[n] = v.norm();
    if (!(r.beta[n] > 0.0)) throw Error(ErrorKind::numerical, "Stieltjes breakdown at n=" + std::to_string(n));
    q.col(n + 1) = v / r.beta[n];
  }
  return r;
}

Recurrence christoffel_lift_linear(const Recurrence& base, const LinearFactor& factor, int n_terms) {
  factor.validate();
  require_length(base, n_terms + 1, "linear lift");
  const double z0 = factor.z0();
  const double sign = factor.slope < 0.0 ? 1.0 : -1.0;
  // ratio[n] = P_{n+1}(z0) / P_n(z0), avoids overflow for large n.
  std::vector<double> ratio(n_terms + 1);
  for (int n = 0; n <= n_terms; ++n) {
    const double back = n > 0 ? base.beta[n - 1] / ratio[n - 1] : 0.0;
    ratio[n] = ((z0 - base.alpha[n]) - back) / base.beta[n];
  }
  Recurrence r;
  r.alpha.resize(n_terms);
  r.beta.resize(n_terms);
  for (int n = 0; n < n_terms; ++n) {
    r.alpha[n] = ratio[n + 1] * base.beta[n + 1] - ratio[n] * base.beta[n] + base.alpha[n + 1];
    // C_n / C_{n+1} with C_n = sign^n sqrt(sign / (P_n P_{n+1} beta_n)).
    const double c_ratio = sign * std::sqrt(ratio[n] * ratio[n + 1] * base.beta[n + 1] / base.beta[n]);
    r.beta[n] = c_ratio * base.beta[n] / ratio[n];
    if (!(r.beta[n] > 0.0))
      throw Error(ErrorKind::numerical, "linear lift produced a non-positive beta at n=" + std::to_string(n));
  }
  r.mass = base.mass * (factor.slope * base.alpha[0] + factor.intercept);
  r.weight = base.weight;
  r.weight.factors.push_back({Polynomial::linear(factor.slope, factor.intercept), 1.0});
  return r;
}

Recurrence christoffel_lift_quadratic(const Recurrence& base, const QuadraticFactor& factor, int n_terms) {
  factor.validate();
  require_length(base, n_terms + 1, "quadratic lift");
  const std::complex<double> z = factor.root;
  // u[n] = P_{n+1}(z)/P_n(z); q[n] = K_{n+1}/K_n with K_n = sum_{k<=n} |P_k(z)|^2.
  std::vector<std::complex<double>> u(n_terms + 1);
  std::vector<double> q(n_terms + 1);
  for (int n = 0; n <= n_terms; ++n) {
    const std::complex<double> back = n > 0 ? base.beta[n - 1] / u[n - 1] : 0.0;
    u[n] = ((z - base.alpha[n]) - back) / base.beta[n];
    q[n] = n == 0 ? 1.0 + std::norm(u[0]) : 1.0 + std::norm(u[n]) * (1.0 - 1.0 / q[n - 1]);
  }
  Recurrence r;
  r.alpha.resize(n_terms);
  r.beta.resize(n_terms);
  for (int n = 0; n < n_terms; ++n) {
    r.beta[n] = std::sqrt(q[n + 1] / q[n]) * base.beta[n + 1];
    r.alpha[n] = (q[n + 1] - 1.0) * std::real(1.0 / u[n + 1]) * base.beta[n + 1] -
                 (q[n] - 1.0) * std::real(1.0 / u[n]) * base.beta[n] + base.alpha[n + 1];
  }
  r.mass = base.mass * (std::norm(base.alpha[0] - z) + base.beta[0] * base.beta[0]);
  r.weight = base.weight;
  r.weight.factors.push_back({factor.monic(), 1.0});
  return r;
}

int lift_count(const WeightSpec& weight) {
  double scale = 1.0;
  int total = 0;
  for (const auto& s : split_factors(weight, scale))
    total += s.lifts * static_cast<int>(s.pieces.linear.size() + s.pieces.quadratic.size());
  return total;
}

Recurrence recurrence_for_weight(const WeightSpec& weight, int n_terms) {
  weight.validate();
  if (n_terms < 1) throw Error(ErrorKind::truncation, "n_terms must be at least 1");
  double constant_scale = 1.0;
  const auto split = split_factors(weight, constant_scale);
  int lifts = 0;
  WeightSpec base_weight(weight.a, weight.b);
  for (std::size_t i = 0; i < split.size(); ++i) {
    lifts += split[i].lifts * static_cast<int>(split[i].pieces.linear.size() + split[i].pieces.quadratic.size());
    if (split[i].remainder != 0.0) base_weight.factors.push_back({weight.factors[i].poly, split[i].remainder});
  }
  const int n_init = n_terms + lifts;
  Recurrence r = base_weight.factors.empty() ? classical_jacobi_recurrence(weight.a, weight.b, n_init)
                                             : stieltjes_recurrence(base_weight, n_init);
  int len = n_init;
  double scale = constant_scale;
  for (const auto& s : split) {
    for (int rep = 0; rep < s.lifts; ++rep) {
      for (const auto& lf : s.pieces.linear) r = christoffel_lift_linear(r, lf, --len);
      for (const auto& qf : s.pieces.quadratic) r = christoffel_lift_quadratic(r, qf, --len);
    }
    scale *= std::pow(s.pieces.scale, s.lifts);
  }
  r.mass *= scale;
  r = r.truncated(n_terms);
  r.weight = weight;
  return r;
}

Eigen::MatrixXd evaluate(const Recurrence& rec, const Eigen::VectorXd& points, int n_max, Exec exec) {
  require_length(rec, n_max, "evaluate");
  const int np = static_cast<int>(points.size());
  Eigen::MatrixXd out(n_max + 1, np);
  const double p0 = 1.0 / std::sqrt(rec.mass);
  auto column = [&](int j) {
    const double z = points(j);
    out(0, j) = p0;
    for (int n = 0; n < n_max; ++n) {
      const double prev = n > 0 ? rec.beta[n - 1] * out(n - 1, j) : 0.0;
      out(n + 1, j) = ((z - rec.alpha[n]) * out(n, j) - prev) / rec.beta[n];
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < np; ++j) column(j);
  } else {
    for (int j = 0; j < np; ++j) column(j);
  }
  return out;
}

Eigen::MatrixXd evaluate_derivative(const Recurrence& rec, const Eigen::VectorXd& points, int n_max, Exec exec) {
  const Eigen::MatrixXd p = evaluate(rec, points, n_max, exec);
  const int np = static_cast<int>(points.size());
  Eigen::MatrixXd out(n_max + 1, np);
  auto column = [&](int j) {
    const double z = points(j);
    out(0, j) = 0.0;
    for (int n = 0; n < n_max; ++n) {
      const double prev = n > 0 ? rec.beta[n - 1] * out(n - 1, j) : 0.0;
      out(n + 1, j) = ((z - rec.alpha[n]) * out(n, j) + p(n, j) - prev) / rec.beta[n];
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < np; ++j) column(j);
  } else {
    for (int j = 0; j < np; ++j) column(j);
  }
  return out;
}

std::vector<std::complex<double>> evaluate_complex(const Recurrence& rec, std::complex<double> z, int n_max) {
  require_length(rec, n_max, "evaluate");
  std::vector<std::complex<double>> p(n_max + 1);
  p[0] = 1.0 / std::sqrt(rec.mass);
  for (int n = 0; n < n_max; ++n) {
    const std::complex<double> prev = n > 0 ? rec.beta[n - 1] * p[n - 1] : 0.0;
    p[n + 1] = ((z - rec.alpha[n]) * p[n] - prev) / rec.beta[n];
  }
  return p;
}

}  // namespace gyro::polyalg
