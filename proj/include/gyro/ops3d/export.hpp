#pragma once

#include <json.hpp>
#include <ostream>

#include "gyro/ops3d/block_operator.hpp"

namespace gyro::ops3d {

/// Header "rows cols nnz", then one "row col value" line per entry (0-based).
void write_triplets(std::ostream& os, const SparseR& m);
/// As write_triplets with "row col re im" lines.
void write_triplets(std::ostream& os, const SparseC& m);

nlohmann::json to_json(const BasisSpec& spec);

/// Shape, bandwidths and per-block structure of an operator for sparsity rendering.
nlohmann::json sparsity_json(const BlockOperator& op, const std::string& name);

}  // namespace gyro::ops3d
