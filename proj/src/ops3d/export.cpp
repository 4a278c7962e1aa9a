#include "gyro/ops3d/export.hpp"

#include <iomanip>
#include <set>

#include "gyro/geometry/geometry.hpp"
#include "gyro/polyalg/serialize.hpp"

namespace gyro::ops3d {

void write_triplets(std::ostream& os, const SparseR& m) {
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n' << std::setprecision(17);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseR::InnerIterator it(m, c); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_triplets(std::ostream& os, const SparseC& m) {
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n' << std::setprecision(17);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseC::InnerIterator it(m, c); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

nlohmann::json to_json(const BasisSpec& spec) {
  const auto tr = spec.truncation();
  std::vector<int> sizes;
  for (int l = 0; l < tr.L; ++l) sizes.push_back(tr.radial_size(l));
  return {{"geometry", geometry::to_json(spec.geometry)},
          {"m", spec.m},
          {"alpha", gyro::decimal(spec.alpha)},
          {"sigma", spec.sigma},
          {"L_max", spec.L_max},
          {"N_max", spec.N_max},
          {"rectangular", spec.rectangular},
          {"radial_sizes", sizes},
          {"size", tr.size()}};
}

nlohmann::json sparsity_json(const BlockOperator& op, const std::string& name) {
  const SparseR flat = op.to_sparse();
  nlohmann::json blocks = nlohmann::json::array();
  int lower = 0, upper = 0;
  for (const auto& b : op.blocks()) {
    const auto& m = b.radial;
    std::set<int> dk;
    int nnz = 0;
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m(r, c) != 0.0) {
          dk.insert(c - r);
          ++nnz;
        }
    if (nnz == 0) continue;
    const auto [ml, mu] = m.measured_band();
    lower = std::max(lower, ml);
    upper = std::max(upper, mu);
    blocks.push_back({{"dl", b.delta_l()},
                      {"l_out", b.l_out},
                      {"l_in", b.l_in},
                      {"rows", m.rows()},
                      {"cols", m.cols()},
                      {"band", {m.lower(), m.upper()}},
                      {"measured_band", {ml, mu}},
                      {"nnz", nnz},
                      {"dk", std::vector<int>(dk.begin(), dk.end())}});
  }
  return {{"name", name},
          {"source", to_json(op.source())},
          {"target", to_json(op.target())},
          {"shape", {flat.rows(), flat.cols()}},
          {"nnz", flat.nonZeros()},
          {"bandwidth", {{"lower", lower}, {"upper", upper}}},
          {"blocks", blocks}};
}

}  // namespace gyro::ops3d
