#pragma once

#include <stdexcept>
#include <string>

namespace gyro {

enum class ErrorKind {
  invalid_weight,
  invalid_factor,
  truncation,
  domain_mismatch,
  numerical,
  range,
  invalid_height,
  invalid_geometry,
  geometry_singular,
  closure,
  assembly,
  shift_collision,
  config,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_weight: return "invalid-weight";
    case ErrorKind::invalid_factor: return "invalid-factor";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::range: return "range";
    case ErrorKind::invalid_height: return "invalid-height";
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::geometry_singular: return "geometry-singular";
    case ErrorKind::closure: return "closure";
    case ErrorKind::assembly: return "assembly";
    case ErrorKind::shift_collision: return "shift-collision";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace gyro
