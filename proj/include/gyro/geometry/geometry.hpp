#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gyro/polyalg/polynomial.hpp"

namespace gyro::geometry {

using polyalg::Polynomial;

enum class Kind { cylinder, annulus };
enum class Extent { full, upper_half };

/// h(t) = (1-t)^{chi_o/2} (1+t)^{chi_i/2} htilde(t)^{chi_h}
struct HeightFunction {
  Polynomial htilde = Polynomial::constant(1.0);
  int chi_o = 0;
  int chi_i = 0;
  double chi_h = 1.0;
};

struct Geometry {
  Kind kind = Kind::cylinder;
  double S_i = 0.0;
  double S_o = 1.0;
  HeightFunction height;
  Extent extent = Extent::full;

  /// Every violated rule, empty when valid.
  std::vector<std::string> validate() const;
  /// Throws invalid-geometry or invalid-height with all violations.
  void require_valid() const;

  bool is_annulus() const { return kind == Kind::annulus; }
  bool is_half() const { return extent == Extent::upper_half; }
  /// S_o^2 - S_i^2
  double delta() const { return S_o * S_o - S_i * S_i; }

  double t_of_s(double s) const;
  double s_of_t(double t) const;
  /// sqrt(S_i^2 (1-t) + S_o^2 (1+t)) = sqrt(2) s
  double stilde(double t) const;
  double height_at(double t) const;
  /// Vertical coordinate: v = eta (full) or zeta (half).
  double physical_z(double t, double v) const;

  /// h^2 as a polynomial in t.
  Polynomial h_squared() const;
  /// True when h itself is a polynomial in t.
  bool height_is_polynomial() const;
  Polynomial h_polynomial() const;
  /// d h / d t
  double height_derivative(double t) const;
  /// Polynomial E with boundary polynomial (1-eta^2) E h^2 = (1-eta^2)(1-t)(1+t)^[annulus] htilde^{2 chi_h}.
  Polynomial boundary_radial_factor() const;
  /// Axis/inner-radius factor with 2 s^2 = scale * rho(t): cylinder (1+t), annulus stilde^2.
  Polynomial rho() const;
  double rho_scale() const { return is_annulus() ? 1.0 : S_o * S_o; }
  /// Degree of h^2 in t; the triangular truncation loses ceil(l D / 2) radial modes at level l.
  int height_sq_degree() const;
};

/// Convert an even polynomial in s to htilde(t) for the given radii.
Polynomial height_from_s(const Polynomial& h_of_s, Kind kind, double S_i, double S_o);

struct CoreaboloidParams {
  double S_i = 0.102;     ///< m
  double S_o = 0.3725;    ///< m
  double H_nr = 0.1708;   ///< m
  double gravity = 9.81;  ///< m/s^2
};

/// Rotation rate (rpm) at which the free surface touches the floor on the axis.
double coreaboloid_singular_rpm(const CoreaboloidParams& p = {});
/// Dimensional free-surface height at radius s (m).
double coreaboloid_height(double rpm, double s, const CoreaboloidParams& p = {});
/// Upper-half annulus nondimensionalized by S_o; throws geometry-singular at or above the singular rate.
Geometry coreaboloid_geometry(double rpm, const CoreaboloidParams& p = {});
/// h = H sqrt(1 - s^2) on the unit disk.
Geometry spheroid_geometry(double H);
/// Unit sphere with an inner cylinder of radius S_i removed.
Geometry excised_sphere_geometry(double S_i);

nlohmann::json to_json(const Geometry& g);
/// Accepts htilde in t ("coordinate": "t") or an even polynomial in s ("coordinate": "s"),
/// radii optionally with "units" of "m" or "cm" (converted, then scaled by S_o).
/// Families: "coreaboloid" (rpm, plain or {"value", "units": "rpm"}), "spheroid" (H), "excised_sphere" (S_i).
Geometry geometry_from_json(const nlohmann::json& j);

}  // namespace gyro::geometry
