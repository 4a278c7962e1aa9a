#include "gyro/polyalg/serialize.hpp"

#include <charconv>
#include <cstdio>

#include "gyro/error.hpp"

namespace gyro {

std::string decimal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_decimal(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw Error(ErrorKind::config, "not a decimal number: '" + s + "'");
    return v;
  }
  throw Error(ErrorKind::config, "expected a number or decimal string");
}

namespace polyalg {

namespace {
nlohmann::json decimals(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(decimal(x));
  return a;
}
std::vector<double> from_decimals(const nlohmann::json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(parse_decimal(x));
  return v;
}
}  // namespace

nlohmann::json to_json(const Polynomial& p) { return decimals(p.coeffs()); }

nlohmann::json to_json(const WeightSpec& w) {
  nlohmann::json j;
  j["a"] = decimal(w.a);
  j["b"] = decimal(w.b);
  j["factors"] = nlohmann::json::array();
  for (const auto& f : w.factors) j["factors"].push_back({{"coeffs", to_json(f.poly)}, {"exponent", decimal(f.exponent)}});
  return j;
}

nlohmann::json to_json(const Recurrence& r) {
  return {{"weight", to_json(r.weight)},
          {"n_terms", r.size()},
          {"mass", decimal(r.mass)},
          {"alpha", decimals(r.alpha)},
          {"beta", decimals(r.beta)}};
}

nlohmann::json to_json(const QuadratureRule& q) {
  std::vector<double> n(q.nodes.data(), q.nodes.data() + q.nodes.size());
  std::vector<double> w(q.weights.data(), q.weights.data() + q.weights.size());
  return {{"n_nodes", q.size()}, {"nodes", decimals(n)}, {"weights", decimals(w)}};
}

nlohmann::json to_json(const BandedMatrix& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["lower"] = m.lower();
  j["upper"] = m.upper();
  j["bandwidth"] = m.bandwidth();
  auto measured = m.measured_band();
  j["measured_lower"] = measured.first;
  j["measured_upper"] = measured.second;
  nlohmann::json entries = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m.in_band(r, c) && m(r, c) != 0.0) entries.push_back({r, c, decimal(m(r, c))});
  j["entries"] = entries;
  if (m.domain) j["domain"] = to_json(*m.domain);
  if (m.codomain) j["codomain"] = to_json(*m.codomain);
  return j;
}

Polynomial polynomial_from_json(const nlohmann::json& j) { return Polynomial(from_decimals(j)); }

WeightSpec weight_from_json(const nlohmann::json& j) {
  WeightSpec w(parse_decimal(j.at("a")), parse_decimal(j.at("b")));
  if (j.contains("factors"))
    for (const auto& f : j.at("factors"))
      w.factors.push_back({polynomial_from_json(f.at("coeffs")), parse_decimal(f.at("exponent"))});
  return w;
}

Recurrence recurrence_from_json(const nlohmann::json& j) {
  Recurrence r;
  r.weight = weight_from_json(j.at("weight"));
  r.mass = parse_decimal(j.at("mass"));
  r.alpha = from_decimals(j.at("alpha"));
  r.beta = from_decimals(j.at("beta"));
  return r;
}

}  // namespace polyalg
}  // namespace gyro
