#include "gyro/geometry/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gyro/error.hpp"
#include "gyro/polyalg/serialize.hpp"
#include "gyro/polyalg/weight.hpp"

namespace gyro::geometry {

namespace {

constexpr double kHeightFloor = 1e-12;

void require_range(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::range, what);
}

}  // namespace

std::vector<std::string> Geometry::validate() const {
  std::vector<std::string> errs;
  if (!(S_o > 0.0)) errs.push_back("radius: S_o must be positive");
  if (!(S_i >= 0.0)) errs.push_back("radius: S_i must be non-negative");
  if (!(S_i < S_o)) errs.push_back("radius: S_i must be smaller than S_o");
  if (kind == Kind::cylinder && S_i != 0.0) errs.push_back("radius: a cylinder has S_i = 0");
  if (kind == Kind::annulus && !(S_i > 0.0)) errs.push_back("radius: an annulus needs S_i > 0");
  const auto& h = height;
  if (h.chi_o != 0 && h.chi_o != 1) errs.push_back("flags: chi_o must be 0 or 1");
  if (h.chi_i != 0 && h.chi_i != 1) errs.push_back("flags: chi_i must be 0 or 1");
  if (kind == Kind::cylinder && h.chi_i != 0) errs.push_back("flags: chi_i must be 0 for a cylinder");
  if (h.chi_h != 1.0 && h.chi_h != 0.5) errs.push_back("flags: chi_h must be 1 or 1/2");
  if (h.htilde.is_zero()) {
    errs.push_back("invalid-height: htilde is the zero polynomial");
  } else {
    double lo = INFINITY;
    for (double t : polyalg::positivity_probe_points()) lo = std::min(lo, h.htilde(t));
    if (!(lo > kHeightFloor)) {
      std::ostringstream os;
      os << "invalid-height: htilde must be strictly positive on [-1,1] (min " << lo << ")";
      errs.push_back(os.str());
    }
  }
  if (extent == Extent::upper_half && (h.chi_o != 0 || h.chi_i != 0 || h.chi_h != 1.0))
    errs.push_back("half-domain: upper-half extent requires (chi_o, chi_i, chi_h) = (0, 0, 1)");
  return errs;
}

void Geometry::require_valid() const {
  const auto errs = validate();
  if (errs.empty()) return;
  std::string msg;
  bool height_only = true;
  for (const auto& e : errs) {
    msg += (msg.empty() ? "" : "; ") + e;
    if (e.rfind("invalid-height", 0) != 0) height_only = false;
  }
  throw Error(height_only ? ErrorKind::invalid_height : ErrorKind::invalid_geometry, msg);
}

double Geometry::t_of_s(double s) const {
  require_range(s >= S_i - 1e-15 * S_o && s <= S_o * (1 + 1e-15), "s outside the radial domain");
  return (2.0 * s * s - (S_o * S_o + S_i * S_i)) / delta();
}

double Geometry::s_of_t(double t) const {
  require_range(t >= -1.0 - 1e-15 && t <= 1.0 + 1e-15, "t outside [-1,1]");
  return std::sqrt(std::max(0.0, 0.5 * (S_i * S_i * (1.0 - t) + S_o * S_o * (1.0 + t))));
}

double Geometry::stilde(double t) const {
  return std::sqrt(std::max(0.0, S_i * S_i * (1.0 - t) + S_o * S_o * (1.0 + t)));
}

double Geometry::height_at(double t) const {
  require_range(t >= -1.0 - 1e-15 && t <= 1.0 + 1e-15, "t outside [-1,1]");
  double h = std::pow(height.htilde(t), height.chi_h);
  if (height.chi_o) h *= std::sqrt(std::max(0.0, 1.0 - t));
  if (height.chi_i) h *= std::sqrt(std::max(0.0, 1.0 + t));
  return h;
}

double Geometry::physical_z(double t, double v) const {
  require_range(v >= -1.0 - 1e-15 && v <= 1.0 + 1e-15, "vertical coordinate outside [-1,1]");
  const double h = height_at(t);
  return is_half() ? 0.5 * (v + 1.0) * h : v * h;
}

Polynomial Geometry::h_squared() const {
  Polynomial p = height.chi_h == 1.0 ? height.htilde * height.htilde : height.htilde;
  if (height.chi_o) p = p * Polynomial::linear(-1.0, 1.0);
  if (height.chi_i) p = p * Polynomial::linear(1.0, 1.0);
  return p;
}

bool Geometry::height_is_polynomial() const {
  return height.chi_o == 0 && height.chi_i == 0 && (height.chi_h == 1.0 || height.htilde.is_constant());
}

Polynomial Geometry::h_polynomial() const {
  if (!height_is_polynomial()) throw Error(ErrorKind::domain_mismatch, "height is not a polynomial in t");
  if (height.chi_h == 1.0) return height.htilde;
  return Polynomial::constant(std::sqrt(height.htilde.coeff(0)));
}

double Geometry::height_derivative(double t) const {
  // (h^2)' / (2 h)
  return h_squared().derivative()(t) / (2.0 * height_at(t));
}

Polynomial Geometry::boundary_radial_factor() const {
  Polynomial e = Polynomial::constant(1.0);
  if (!height.chi_o) e = e * Polynomial::linear(-1.0, 1.0);
  if (is_annulus() && !height.chi_i) e = e * Polynomial::linear(1.0, 1.0);
  return e;
}

Polynomial Geometry::rho() const {
  if (is_annulus()) return Polynomial({S_i * S_i + S_o * S_o, S_o * S_o - S_i * S_i});
  return Polynomial::linear(1.0, 1.0);
}

int Geometry::height_sq_degree() const { return h_squared().degree(); }

Polynomial height_from_s(const Polynomial& h_of_s, Kind kind, double S_i, double S_o) {
  const auto& c = h_of_s.coeffs();
  for (std::size_t k = 1; k < c.size(); k += 2)
    if (c[k] != 0.0) throw Error(ErrorKind::invalid_height, "height authored in s must be even in s");
  const double si = kind == Kind::annulus ? S_i : 0.0;
  // s^2 = ((S_o^2 + S_i^2) + (S_o^2 - S_i^2) t) / 2
  const Polynomial s2({0.5 * (S_o * S_o + si * si), 0.5 * (S_o * S_o - si * si)});
  std::vector<double> even;
  for (std::size_t k = 0; k < c.size(); k += 2) even.push_back(c[k]);
  return Polynomial(even).compose(s2);
}

double coreaboloid_singular_rpm(const CoreaboloidParams& p) {
  const double omega = std::sqrt(4.0 * p.gravity * p.H_nr) / p.S_o;
  return omega * 60.0 / (2.0 * std::numbers::pi);
}

double coreaboloid_height(double rpm, double s, const CoreaboloidParams& p) {
  const double omega = rpm * 2.0 * std::numbers::pi / 60.0;
  const double h0 = p.H_nr - omega * omega * p.S_o * p.S_o / (4.0 * p.gravity);
  return h0 + omega * omega * s * s / (2.0 * p.gravity);
}

Geometry coreaboloid_geometry(double rpm, const CoreaboloidParams& p) {
  if (!(rpm >= 0.0)) throw Error(ErrorKind::range, "rotation rate must be non-negative");
  const double rpm_max = coreaboloid_singular_rpm(p);
  if (rpm >= rpm_max) {
    std::ostringstream os;
    os.precision(6);
    os << "Coreaboloid surface reaches the floor at " << rpm_max << " rpm; requested " << rpm;
    throw Error(ErrorKind::geometry_singular, os.str());
  }
  const double omega = rpm * 2.0 * std::numbers::pi / 60.0;
  const double h0 = p.H_nr - omega * omega * p.S_o * p.S_o / (4.0 * p.gravity);
  Geometry g;
  g.kind = Kind::annulus;
  g.S_i = p.S_i / p.S_o;
  g.S_o = 1.0;
  g.extent = Extent::upper_half;
  const Polynomial h_s({h0 / p.S_o, 0.0, omega * omega * p.S_o / (2.0 * p.gravity)});
  g.height.htilde = height_from_s(h_s, g.kind, g.S_i, g.S_o);
  g.require_valid();
  return g;
}

Geometry spheroid_geometry(double H) {
  if (!(H > 0.0)) throw Error(ErrorKind::range, "spheroid height must be positive");
  Geometry g;
  g.kind = Kind::cylinder;
  g.height.chi_o = 1;
  // 1 - s^2 = (1 - t)/2
  g.height.htilde = Polynomial::constant(H / std::sqrt(2.0));
  return g;
}

Geometry excised_sphere_geometry(double S_i) {
  Geometry g;
  g.kind = Kind::annulus;
  g.S_i = S_i;
  g.S_o = 1.0;
  g.height.chi_o = 1;
  // 1 - s^2 = (1 - S_i^2)(1 - t)/2
  g.height.htilde = Polynomial::constant(std::sqrt(0.5 * (1.0 - S_i * S_i)));
  g.require_valid();
  return g;
}

nlohmann::json to_json(const Geometry& g) {
  nlohmann::json j;
  j["kind"] = g.is_annulus() ? "annulus" : "cylinder";
  j["S_i"] = decimal(g.S_i);
  j["S_o"] = decimal(g.S_o);
  j["extent"] = g.is_half() ? "upper_half" : "full";
  j["height"] = {{"coordinate", "t"},
                 {"coeffs", polyalg::to_json(g.height.htilde)},
                 {"chi_o", g.height.chi_o},
                 {"chi_i", g.height.chi_i},
                 {"chi_h", decimal(g.height.chi_h)}};
  return j;
}

namespace {

double length_in_m(const nlohmann::json& v, const std::string& default_units, bool& dimensional) {
  if (v.is_object()) {
    const std::string u = v.value("units", default_units);
    const double x = parse_decimal(v.at("value"));
    if (u == "m") {
      dimensional = true;
      return x;
    }
    if (u == "cm") {
      dimensional = true;
      return x / 100.0;
    }
    if (u == "nondimensional") return x;
    throw Error(ErrorKind::config, "unknown length unit '" + u + "'");
  }
  return parse_decimal(v);
}

double rotation_in_rpm(const nlohmann::json& v) {
  if (v.is_object()) {
    const std::string u = v.value("units", "rpm");
    if (u != "rpm") throw Error(ErrorKind::config, "unknown rotation unit '" + u + "'");
    return parse_decimal(v.at("value"));
  }
  return parse_decimal(v);
}

}  // namespace

Geometry geometry_from_json(const nlohmann::json& j) {
  const std::string family = j.value("family", "custom");
  if (family == "coreaboloid") {
    CoreaboloidParams p;
    bool dim = false;
    if (j.contains("S_i")) p.S_i = length_in_m(j["S_i"], "m", dim);
    if (j.contains("S_o")) p.S_o = length_in_m(j["S_o"], "m", dim);
    if (j.contains("H_nr")) p.H_nr = length_in_m(j["H_nr"], "m", dim);
    if (j.contains("gravity")) p.gravity = parse_decimal(j["gravity"]);
    if (!j.contains("rpm")) throw Error(ErrorKind::config, "coreaboloid descriptor needs 'rpm'");
    return coreaboloid_geometry(rotation_in_rpm(j["rpm"]), p);
  }
  if (family == "spheroid") return spheroid_geometry(parse_decimal(j.at("H")));
  if (family == "excised_sphere") return excised_sphere_geometry(parse_decimal(j.at("S_i")));
  if (family != "custom") throw Error(ErrorKind::config, "unknown geometry family '" + family + "'");

  Geometry g;
  const std::string kind = j.value("kind", "cylinder");
  if (kind != "cylinder" && kind != "annulus") throw Error(ErrorKind::config, "kind must be cylinder or annulus");
  g.kind = kind == "annulus" ? Kind::annulus : Kind::cylinder;
  bool dim = false;
  double si = j.contains("S_i") ? length_in_m(j["S_i"], "nondimensional", dim) : 0.0;
  double so = j.contains("S_o") ? length_in_m(j["S_o"], "nondimensional", dim) : 1.0;
  const std::string ext = j.value("extent", "full");
  if (ext != "full" && ext != "upper_half") throw Error(ErrorKind::config, "extent must be full or upper_half");
  g.extent = ext == "upper_half" ? Extent::upper_half : Extent::full;
  const auto& h = j.at("height");
  g.height.chi_o = h.value("chi_o", 0);
  g.height.chi_i = h.value("chi_i", 0);
  g.height.chi_h = h.contains("chi_h") ? parse_decimal(h["chi_h"]) : 1.0;
  Polynomial coeffs = polyalg::polynomial_from_json(h.at("coeffs"));
  const std::string coord = h.value("coordinate", "t");
  if (dim) {
    // Lengths scale by S_o; h(s) coefficients of s^k scale by S_o^{k-1}.
    std::vector<double> c = coeffs.coeffs();
    if (coord == "s")
      for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(so, static_cast<double>(k) - 1.0);
    else
      for (double& x : c) x /= so;
    coeffs = Polynomial(c);
    si /= so;
    so = 1.0;
  }
  g.S_i = si;
  g.S_o = so;
  if (coord == "s")
    g.height.htilde = height_from_s(coeffs, g.kind, g.S_i, g.S_o);
  else if (coord == "t")
    g.height.htilde = coeffs;
  else
    throw Error(ErrorKind::config, "height coordinate must be s or t");
  g.require_valid();
  return g;
}

}  // namespace gyro::geometry
