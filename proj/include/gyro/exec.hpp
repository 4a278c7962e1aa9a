#pragma once

namespace gyro {

/// Selects the OpenMP kernel or its serial reference.
enum class Exec { parallel, serial };

}  // namespace gyro
