#include "gyro/ops3d/block_operator.hpp"

#include <algorithm>

#include "gyro/error.hpp"

namespace gyro::ops3d {

namespace {

std::string describe(const BasisSpec& s) {
  return "(m=" + std::to_string(s.m) + ", alpha=" + std::to_string(s.alpha) + ", sigma=" + std::to_string(s.sigma) +
         ", L=" + std::to_string(s.L_max) + ", N=" + std::to_string(s.N_max) + ")";
}

}  // namespace

BlockOperator::BlockOperator(BasisSpec source, BasisSpec target) : source_(std::move(source)), target_(std::move(target)) {}

std::vector<Block> BlockOperator::blocks() const {
  std::vector<Block> out;
  for (const auto& [key, m] : blocks_) out.push_back({key.first, key.second, m});
  return out;
}

void BlockOperator::add_block(int l_out, int l_in, const BandedMatrix& m) {
  const auto key = std::make_pair(l_out, l_in);
  auto it = blocks_.find(key);
  if (it == blocks_.end())
    blocks_.emplace(key, m);
  else
    it->second = it->second + m;
}

SparseR BlockOperator::to_sparse() const {
  const auto ts = target_.truncation(), ss = source_.truncation();
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [key, m] : blocks_) {
    const int ro = ts.offset(key.first), co = ss.offset(key.second);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = std::max(0, r - m.lower()); c <= std::min(m.cols() - 1, r + m.upper()); ++c) {
        const double v = m(r, c);
        if (v != 0.0) trip.emplace_back(ro + r, co + c, v);
      }
  }
  SparseR out(ts.size(), ss.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXcd BlockOperator::apply(const Eigen::VectorXcd& x) const {
  if (x.size() != source_.truncation().size()) throw Error(ErrorKind::domain_mismatch, "vector size does not match the source");
  return to_sparse().cast<cd>() * x;
}

BlockOperator BlockOperator::operator*(const BlockOperator& rhs) const {
  if (!rhs.target_.same_space(source_))
    throw Error(ErrorKind::assembly, "composition mismatch: " + describe(rhs.target_) + " feeds " + describe(source_));
  BlockOperator out(rhs.source_, target_);
  for (const auto& [ka, a] : blocks_)
    for (const auto& [kb, b] : rhs.blocks_)
      if (ka.second == kb.first) out.add_block(ka.first, kb.second, a * b);
  return out;
}

BlockOperator BlockOperator::operator+(const BlockOperator& o) const {
  if (!o.source_.same_space(source_) || !o.target_.same_space(target_))
    throw Error(ErrorKind::assembly, "sum of operators between different spaces: " + describe(source_) + "->" +
                                         describe(target_) + " and " + describe(o.source_) + "->" + describe(o.target_));
  BlockOperator out = *this;
  for (const auto& [k, m] : o.blocks_) out.add_block(k.first, k.second, m);
  return out;
}

BlockOperator BlockOperator::scaled(double s) const {
  BlockOperator out(source_, target_);
  for (const auto& [k, m] : blocks_) out.blocks_.emplace(k, m.scaled(s));
  return out;
}

BlockOperator BlockOperator::with_target(const BasisSpec& bigger) const {
  const auto tb = bigger.truncation();
  BlockOperator out(source_, bigger);
  for (const auto& [k, m] : blocks_) {
    const int rows = tb.radial_size(k.first);
    if (rows < m.rows()) throw Error(ErrorKind::closure, "target truncation too small to hold the operator");
    out.blocks_.emplace(k, m.resized(rows, m.cols()));
  }
  return out;
}

double BlockOperator::max_abs() const {
  double v = 0.0;
  for (const auto& [k, m] : blocks_) v = std::max(v, m.max_abs());
  return v;
}

SpinOperator SpinOperator::single(const BlockOperator& op, int sigma_out, int sigma_in, cd coeff) {
  return {{sigma_in}, {sigma_out}, {{sigma_out, sigma_in, coeff, op}}};
}

int SpinOperator::in_size(int sigma) const {
  for (const auto& t : terms)
    if (t.sigma_in == sigma) return t.op.source().truncation().size();
  throw Error(ErrorKind::assembly, "no term reads spin " + std::to_string(sigma));
}

int SpinOperator::out_size(int sigma) const {
  for (const auto& t : terms)
    if (t.sigma_out == sigma) return t.op.target().truncation().size();
  throw Error(ErrorKind::assembly, "no term writes spin " + std::to_string(sigma));
}

SparseC SpinOperator::to_sparse() const {
  std::map<int, int> in_off, out_off;
  int rows = 0, cols = 0;
  for (int s : spins_in) {
    in_off[s] = cols;
    cols += in_size(s);
  }
  for (int s : spins_out) {
    out_off[s] = rows;
    rows += out_size(s);
  }
  std::vector<Eigen::Triplet<cd>> trip;
  for (const auto& t : terms) {
    const SparseR m = t.op.to_sparse();
    for (int c = 0; c < m.outerSize(); ++c)
      for (SparseR::InnerIterator it(m, c); it; ++it)
        trip.emplace_back(out_off.at(t.sigma_out) + it.row(), in_off.at(t.sigma_in) + it.col(), t.coeff * it.value());
  }
  SparseC out(rows, cols);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpinOperator SpinOperator::operator*(const SpinOperator& rhs) const {
  SpinOperator out;
  out.spins_in = rhs.spins_in;
  out.spins_out = spins_out;
  for (const auto& a : terms)
    for (const auto& b : rhs.terms)
      if (a.sigma_in == b.sigma_out) out.terms.push_back({a.sigma_out, b.sigma_in, a.coeff * b.coeff, a.op * b.op});
  return out;
}

SpinOperator SpinOperator::operator+(const SpinOperator& o) const {
  SpinOperator out = *this;
  for (int s : o.spins_in)
    if (std::find(out.spins_in.begin(), out.spins_in.end(), s) == out.spins_in.end()) out.spins_in.push_back(s);
  for (int s : o.spins_out)
    if (std::find(out.spins_out.begin(), out.spins_out.end(), s) == out.spins_out.end()) out.spins_out.push_back(s);
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  return out;
}

SpinOperator SpinOperator::operator-(const SpinOperator& o) const { return *this + o.scaled(-1.0); }

SpinOperator SpinOperator::scaled(cd s) const {
  SpinOperator out = *this;
  for (auto& t : out.terms) t.coeff *= s;
  return out;
}

double max_abs(const SparseC& m) {
  double v = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseC::InnerIterator it(m, c); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

}  // namespace gyro::ops3d
