#pragma once

#include <json.hpp>
#include <string>

#include "gyro/polyalg/banded.hpp"
#include "gyro/polyalg/quadrature.hpp"
#include "gyro/polyalg/recurrence.hpp"

namespace gyro {

/// Shortest round-trippable decimal text of a double.
std::string decimal(double v);
double parse_decimal(const nlohmann::json& j);

namespace polyalg {

nlohmann::json to_json(const Polynomial& p);
nlohmann::json to_json(const WeightSpec& w);
nlohmann::json to_json(const Recurrence& r);
nlohmann::json to_json(const QuadratureRule& q);
/// Band storage as (row, col, value) triplets plus shape and band limits.
nlohmann::json to_json(const BandedMatrix& m);

Polynomial polynomial_from_json(const nlohmann::json& j);
WeightSpec weight_from_json(const nlohmann::json& j);
Recurrence recurrence_from_json(const nlohmann::json& j);

}  // namespace polyalg
}  // namespace gyro
