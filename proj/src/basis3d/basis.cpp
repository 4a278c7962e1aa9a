#include "gyro/basis3d/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gyro/error.hpp"
#include "gyro/polyalg/quadrature.hpp"
#include "gyro/polyalg/serialize.hpp"
#include "gyro/polyalg/weight.hpp"

namespace gyro::basis3d {

using polyalg::Factorization;
using polyalg::LinearFactor;

namespace {

int ceil_half(int x) { return (x + 1) / 2; }

bool is_unit(const Polynomial& p) { return p.is_constant() && p.coeff(0) == 1.0; }

}  // namespace

int Truncation::radial_size(int l) const {
  if (l < 0 || l >= L) return 0;
  if (rectangular) return N;
  return std::max(0, N - ceil_half(l * D));
}

int Truncation::offset(int l) const {
  int off = 0;
  for (int j = 0; j < std::min(l, L); ++j) off += radial_size(j);
  return off;
}

int Truncation::size() const { return offset(L); }

void BasisSpec::validate() const {
  geometry.require_valid();
  if (!(alpha > -1.0)) throw Error(ErrorKind::range, "alpha must exceed -1");
  if (sigma < -2 || sigma > 2) throw Error(ErrorKind::range, "spin must lie in -2..2");
  if (L_max < 1 || N_max < 1) throw Error(ErrorKind::truncation, "L_max and N_max must be positive");
  const int last = N_max - ceil_half((L_max - 1) * geometry.height_sq_degree());
  if (!rectangular && last < 0)
    throw Error(ErrorKind::truncation, "triangular truncation leaves a negative radial size at l = L_max - 1 (" +
                                           std::to_string(last) + ")");
}

Truncation BasisSpec::truncation() const { return {L_max, N_max, geometry.height_sq_degree(), rectangular}; }

BasisSpec BasisSpec::with_alpha(double a) const {
  BasisSpec s = *this;
  s.alpha = a;
  return s;
}

BasisSpec BasisSpec::with_sigma(int sg) const {
  BasisSpec s = *this;
  s.sigma = sg;
  return s;
}

BasisSpec BasisSpec::with_size(int L, int N) const {
  BasisSpec s = *this;
  s.L_max = L;
  s.N_max = N;
  return s;
}

bool BasisSpec::same_space(const BasisSpec& o) const {
  return m == o.m && sigma == o.sigma && std::abs(alpha - o.alpha) < 1e-14 && truncation() == o.truncation() &&
         geometry.kind == o.geometry.kind && geometry.extent == o.geometry.extent && geometry.S_i == o.geometry.S_i &&
         geometry.S_o == o.geometry.S_o && geometry.height.htilde == o.geometry.height.htilde &&
         geometry.height.chi_o == o.geometry.height.chi_o && geometry.height.chi_i == o.geometry.height.chi_i &&
         geometry.height.chi_h == o.geometry.height.chi_h;
}

WeightSpec level_weight(const BasisSpec& spec, int l) {
  const auto& g = spec.geometry;
  const auto& h = g.height;
  const double b = spec.regularity();
  WeightSpec w;
  w.a = (l + 0.5) * h.chi_o + spec.alpha;
  w.b = g.is_annulus() ? (l + 0.5) * h.chi_i + spec.alpha : b;
  const double c = (2.0 * l + 2.0 * spec.alpha + 1.0) * h.chi_h;
  if (!is_unit(h.htilde) && c != 0.0) w.factors.push_back({h.htilde, c});
  if (g.is_annulus() && b != 0.0) w.factors.push_back({g.rho(), b});
  return w;
}

int hierarchy_length(const BasisSpec& spec) {
  const int D = spec.geometry.height_sq_degree();
  return spec.N_max + ceil_half(D * spec.L_max) + D + 12;
}

namespace {

struct LevelStep {
  std::vector<LinearFactor> linear;
  std::vector<polyalg::QuadraticFactor> quadratic;
  double scale = 1.0;
  int cost() const { return static_cast<int>(linear.size() + quadratic.size()); }
};

LevelStep level_step(const Geometry& g) {
  LevelStep st;
  if (g.height.chi_o) st.linear.push_back({-1.0, 1.0});
  if (g.height.chi_i) st.linear.push_back({1.0, 1.0});
  const Polynomial& ht = g.height.htilde;
  if (is_unit(ht)) return st;
  const int copies = g.height.chi_h == 1.0 ? 2 : 1;
  const Factorization f = polyalg::factorize(ht);
  for (int c = 0; c < copies; ++c) {
    st.linear.insert(st.linear.end(), f.linear.begin(), f.linear.end());
    st.quadratic.insert(st.quadratic.end(), f.quadratic.begin(), f.quadratic.end());
  }
  st.scale = std::pow(f.scale, copies);
  return st;
}

std::shared_ptr<const RadialWeightTable> compute_hierarchy(const BasisSpec& spec) {
  auto table = std::make_shared<RadialWeightTable>();
  const int len = hierarchy_length(spec);
  table->length = len;
  const LevelStep step = level_step(spec.geometry);
  int cur_len = len + step.cost() * (spec.L_max - 1);
  Recurrence r = polyalg::recurrence_for_weight(level_weight(spec, 0), cur_len);
  for (int l = 0; l < spec.L_max; ++l) {
    if (l > 0) {
      for (const auto& lf : step.linear) r = polyalg::christoffel_lift_linear(r, lf, --cur_len);
      for (const auto& qf : step.quadratic) r = polyalg::christoffel_lift_quadratic(r, qf, --cur_len);
      r.mass *= step.scale;
    }
    RadialLevel lev;
    lev.weight = level_weight(spec, l);
    lev.rec = r.truncated(len);
    lev.rec.weight = lev.weight;
    table->levels.push_back(std::move(lev));
  }
  return table;
}

}  // namespace

std::shared_ptr<const RadialWeightTable> build_hierarchy(const BasisSpec& spec) {
  spec.validate();
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const RadialWeightTable>> cache;
  const std::string key = geometry::to_json(spec.geometry).dump() + "|" + std::to_string(spec.regularity()) + "|" +
                          decimal(spec.alpha) + "|" + std::to_string(spec.L_max) + "|" +
                          std::to_string(hierarchy_length(spec));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = compute_hierarchy(spec);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 256) cache.clear();
  return cache.emplace(key, table).first->second;
}

double radial_prefactor(const BasisSpec& spec, double t) {
  const double b = spec.regularity();
  if (b == 0.0) return 1.0;
  return std::pow(std::max(0.0, spec.geometry.rho()(t)), 0.5 * b);
}

Polynomial height_power(const Geometry& g, int p) {
  if (p < 0) throw Error(ErrorKind::assembly, "negative height power " + std::to_string(p));
  if (p % 2 == 0) return g.h_squared().pow(p / 2);
  if (!g.height_is_polynomial())
    throw Error(ErrorKind::assembly, "odd height power " + std::to_string(p) + " of a non-polynomial height");
  return g.h_polynomial().pow(p);
}

std::complex<double> basis_eval(const BasisSpec& spec, int l, int k, double t, double v, double phi) {
  const Truncation tr = spec.truncation();
  if (l < 0 || l >= tr.L || k < 0 || k >= tr.radial_size(l))
    throw Error(ErrorKind::range, "basis index (l, k) = (" + std::to_string(l) + ", " + std::to_string(k) +
                                      ") outside the truncation");
  if (t < -1.0 || t > 1.0 || v < -1.0 || v > 1.0) throw Error(ErrorKind::range, "basis point outside [-1,1]^2");
  const auto table = build_hierarchy(spec);
  Eigen::VectorXd tp(1), vp(1);
  tp << t;
  vp << v;
  const double q = polyalg::evaluate(table->level(l).rec, tp, k, Exec::serial)(k, 0);
  const auto vert = polyalg::classical_jacobi_recurrence(spec.alpha, spec.alpha, l + 1);
  const double p = polyalg::evaluate(vert, vp, l, Exec::serial)(l, 0);
  const double radial = radial_prefactor(spec, t) * std::pow(spec.geometry.height_at(t), l) * q;
  return radial * p * std::exp(std::complex<double>(0.0, spec.m * phi));
}

VerticalCouplings vertical_couplings(double alpha, int L) {
  VerticalCouplings vc;
  const auto lo = polyalg::classical_jacobi_recurrence(alpha, alpha, L + 2);
  const auto hi = polyalg::classical_jacobi_recurrence(alpha + 1, alpha + 1, L + 2);
  const auto q = polyalg::gauss_quadrature(hi, L + 2);
  const Eigen::MatrixXd p_lo = polyalg::evaluate(lo, q.nodes, L);
  const Eigen::MatrixXd dp_lo = polyalg::evaluate_derivative(lo, q.nodes, L);
  const Eigen::MatrixXd p_hi = polyalg::evaluate(hi, q.nodes, L);
  auto ip = [&](const Eigen::MatrixXd& f, int i, int j) {
    return (f.row(i).array() * p_hi.row(j).array() * q.weights.transpose().array()).sum();
  };
  for (int l = 0; l <= L; ++l) {
    vc.gamma.push_back(ip(p_lo, l, l));
    vc.delta.push_back(l >= 2 ? -ip(p_lo, l, l - 2) : 0.0);
    vc.lambda.push_back(l >= 1 ? ip(dp_lo, l, l - 1) : 0.0);
    vc.beta.push_back(lo.beta[l]);
  }
  return vc;
}

}  // namespace gyro::basis3d
