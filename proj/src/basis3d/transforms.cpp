#include "gyro/basis3d/transforms.hpp"

#include <sstream>

#include "gyro/error.hpp"
#include "gyro/polyalg/quadrature.hpp"
#include "gyro/polyalg/serialize.hpp"

namespace gyro::basis3d {

CoefficientTensor CoefficientTensor::zeros(const BasisSpec& spec) {
  CoefficientTensor c;
  c.m = spec.m;
  c.alpha = spec.alpha;
  c.sigma = spec.sigma;
  c.trunc = spec.truncation();
  c.values = Eigen::VectorXcd::Zero(c.trunc.size());
  return c;
}

std::complex<double>& CoefficientTensor::at(int l, int k) {
  if (l < 0 || l >= trunc.L || k < 0 || k >= trunc.radial_size(l))
    throw Error(ErrorKind::range, "coefficient index outside the truncation");
  return values[trunc.offset(l) + k];
}

std::complex<double> CoefficientTensor::at(int l, int k) const {
  if (l < 0 || l >= trunc.L || k < 0 || k >= trunc.radial_size(l))
    throw Error(ErrorKind::range, "coefficient index outside the truncation");
  return values[trunc.offset(l) + k];
}

Grid analysis_grid(const BasisSpec& spec) {
  const auto table = build_hierarchy(spec);
  const int D = spec.geometry.height_sq_degree();
  const int n_rad = spec.N_max + (D * spec.L_max + 1) / 2 + 2;
  const auto radial = polyalg::gauss_quadrature(table->level(0).rec, n_rad);
  const auto vertical = polyalg::gauss_jacobi(spec.alpha, spec.alpha, spec.L_max + 2);
  return {radial.nodes, vertical.nodes, radial.weights, vertical.weights};
}

namespace {

struct RadialSamples {
  Eigen::VectorXd R, h;
  std::vector<Eigen::MatrixXd> Q;  // per level, (k, point)
};

RadialSamples radial_samples(const BasisSpec& spec, const Eigen::VectorXd& t, Exec exec) {
  const auto table = build_hierarchy(spec);
  const Truncation tr = spec.truncation();
  RadialSamples rs;
  rs.R.resize(t.size());
  rs.h.resize(t.size());
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    rs.R[j] = radial_prefactor(spec, t[j]);
    rs.h[j] = spec.geometry.height_at(t[j]);
  }
  rs.Q.resize(tr.L);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    if (n > 0) rs.Q[l] = polyalg::evaluate(table->level(l).rec, t, n - 1, Exec::serial);
  }
  return rs;
}

}  // namespace

Eigen::MatrixXcd synthesize_at(const BasisSpec& spec, const Eigen::VectorXcd& coeffs, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& v, Exec exec) {
  const Truncation tr = spec.truncation();
  if (coeffs.size() != tr.size()) throw Error(ErrorKind::domain_mismatch, "coefficient count does not match the truncation");
  const RadialSamples rs = radial_samples(spec, t, exec);
  const auto vert = polyalg::classical_jacobi_recurrence(spec.alpha, spec.alpha, tr.L + 1);
  const Eigen::MatrixXd P = polyalg::evaluate(vert, v, tr.L - 1, exec);
  // G(j, l) = R_j h_j^l sum_k c_lk Q_k(t_j)
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(t.size(), tr.L);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    if (n == 0) continue;
    const Eigen::VectorXcd seg = coeffs.segment(tr.offset(l), n);
    Eigen::VectorXcd col = rs.Q[l].transpose().cast<std::complex<double>>() * seg;
    for (Eigen::Index j = 0; j < t.size(); ++j) col[j] *= rs.R[j] * std::pow(rs.h[j], l);
    G.col(l) = col;
  }
  return G * P.topRows(tr.L).cast<std::complex<double>>();
}

GridField synthesize(const BasisSpec& spec, const CoefficientTensor& coeffs, Exec exec) {
  if (coeffs.trunc != spec.truncation() || coeffs.m != spec.m || coeffs.sigma != spec.sigma)
    throw Error(ErrorKind::domain_mismatch, "coefficient tensor does not belong to this basis");
  GridField f;
  f.grid = analysis_grid(spec);
  f.values = synthesize_at(spec, coeffs.values, f.grid.t, f.grid.v, exec);
  return f;
}

CoefficientTensor analyze(const BasisSpec& spec, const GridField& field, Exec exec) {
  const Grid grid = analysis_grid(spec);
  if (field.values.rows() != grid.t.size() || field.values.cols() != grid.v.size() ||
      !field.grid.t.isApprox(grid.t, 1e-15) || !field.grid.v.isApprox(grid.v, 1e-15))
    throw Error(ErrorKind::domain_mismatch, "field is not sampled on the analysis grid of this basis");
  const Truncation tr = spec.truncation();
  const RadialSamples rs = radial_samples(spec, grid.t, exec);
  const auto vert = polyalg::classical_jacobi_recurrence(spec.alpha, spec.alpha, tr.L + 1);
  const Eigen::MatrixXd P = polyalg::evaluate(vert, grid.v, tr.L - 1, exec);
  // g(j, l) = sum_i wv_i P_l(v_i) f(t_j, v_i)
  const Eigen::MatrixXcd g = field.values * (grid.wv.asDiagonal() * P.transpose()).cast<std::complex<double>>();
  CoefficientTensor out = CoefficientTensor::zeros(spec);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int l = 0; l < tr.L; ++l) {
    const int n = tr.radial_size(l);
    if (n == 0) continue;
    Eigen::VectorXcd col(grid.t.size());
    for (Eigen::Index j = 0; j < grid.t.size(); ++j)
      col[j] = g(j, l) * grid.wt[j] * std::pow(rs.h[j], l) / rs.R[j];
    out.values.segment(tr.offset(l), n) = rs.Q[l].cast<std::complex<double>>() * col;
  }
  return out;
}

nlohmann::json to_json(const CoefficientTensor& c) {
  nlohmann::json j;
  j["m"] = c.m;
  j["alpha"] = decimal(c.alpha);
  j["sigma"] = c.sigma;
  j["L_max"] = c.trunc.L;
  j["N_max"] = c.trunc.N;
  j["height_sq_degree"] = c.trunc.D;
  j["truncation"] = c.trunc.rectangular ? "rectangular" : "triangular";
  j["ordering"] = "k fastest, then l";
  nlohmann::json ls = nlohmann::json::array(), ks = nlohmann::json::array(), re = nlohmann::json::array(),
                 im = nlohmann::json::array();
  for (int l = 0; l < c.trunc.L; ++l)
    for (int k = 0; k < c.trunc.radial_size(l); ++k) {
      const auto v = c.at(l, k);
      ls.push_back(l);
      ks.push_back(k);
      re.push_back(decimal(v.real()));
      im.push_back(decimal(v.imag()));
    }
  j["l"] = ls;
  j["k"] = ks;
  j["re"] = re;
  j["im"] = im;
  return j;
}

std::string to_csv(const CoefficientTensor& c) {
  std::ostringstream os;
  os << "m,l,k,re,im\n";
  for (int l = 0; l < c.trunc.L; ++l)
    for (int k = 0; k < c.trunc.radial_size(l); ++k) {
      const auto v = c.at(l, k);
      os << c.m << ',' << l << ',' << k << ',' << decimal(v.real()) << ',' << decimal(v.imag()) << '\n';
    }
  return os.str();
}

}  // namespace gyro::basis3d
