#include "gyro/eigen/modes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gyro/basis3d/transforms.hpp"
#include "gyro/error.hpp"
#include "gyro/ops3d/operators.hpp"
#include "gyro/polyalg/serialize.hpp"

namespace gyro::eigen {

namespace {

constexpr cd I{0.0, 1.0};
const double kRootHalf = std::sqrt(0.5);

Eigen::VectorXd linspace(int n) { return Eigen::VectorXd::LinSpaced(n, -1.0, 1.0); }

struct RawFields {
  Eigen::MatrixXcd up, um, u0, p;
};

RawFields raw_fields(const SystemAssembly& sys, const Eigen::VectorXcd& x, const Eigen::VectorXd& t,
                     const Eigen::VectorXd& v, Exec exec, bool with_pressure) {
  RawFields f;
  auto velocity = [&](int sg) {
    return basis3d::synthesize_at(sys.recombined.with_sigma(sg), recombined_velocity(sys, x, sg), t, v, exec);
  };
  f.up = velocity(+1);
  f.um = velocity(-1);
  f.u0 = velocity(0);
  if (with_pressure) f.p = basis3d::synthesize_at(sys.pressure, segment(sys, x, "P"), t, v, exec);
  return f;
}

double max_speed(const RawFields& f) {
  return (f.up.cwiseAbs2() + f.um.cwiseAbs2() + f.u0.cwiseAbs2()).cwiseSqrt().maxCoeff();
}

std::string num(double x) { return decimal(x); }

}  // namespace

Cylindrical to_cylindrical(const Spinor& u) {
  return {kRootHalf * (u.plus + u.minus), kRootHalf * I * (u.minus - u.plus), u.zero};
}

Spinor to_spinor(const Cylindrical& u) {
  return {kRootHalf * (u.s + I * u.phi), kRootHalf * (u.s - I * u.phi), u.z};
}

Eigen::VectorXcd segment(const SystemAssembly& sys, const Eigen::VectorXcd& x, const std::string& name) {
  if (x.size() != sys.size()) throw Error(ErrorKind::domain_mismatch, "vector does not match the system size");
  const Segment& s = sys.unknown(name);
  return x.segment(s.offset, s.size);
}

Eigen::VectorXcd recombined_velocity(const SystemAssembly& sys, const Eigen::VectorXcd& x, int sigma) {
  const std::string name = sigma > 0 ? "V+" : sigma < 0 ? "V-" : "V0";
  return ops3d::conversion_adjoint(sys.velocity.with_sigma(sigma)).apply(segment(sys, x, name));
}

ModeFields reconstruct(const SystemAssembly& sys, const Eigen::VectorXcd& x, const Eigen::VectorXd& t,
                       const Eigen::VectorXd& v, Exec exec) {
  const RawFields raw = raw_fields(sys, x, t, v, exec, true);
  ModeFields f;
  f.t = t;
  f.v = v;
  const Geometry& g = sys.geometry;
  f.s.resize(t.size(), v.size());
  f.z.resize(t.size(), v.size());
  for (Eigen::Index i = 0; i < t.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      f.s(i, j) = g.s_of_t(t[i]);
      f.z(i, j) = g.physical_z(t[i], v[j]);
    }
  Eigen::Index bi = 0, bj = 0;
  const double pmax = raw.p.cwiseAbs().maxCoeff(&bi, &bj);
  if (pmax > 0) f.normalization = std::conj(raw.p(bi, bj)) / (pmax * pmax);
  f.u_s = (kRootHalf * f.normalization) * (raw.up + raw.um);
  f.u_phi = (kRootHalf * I * f.normalization) * (raw.um - raw.up);
  f.u_z = f.normalization * raw.u0;
  f.p = f.normalization * raw.p;
  return f;
}

ModeFields reconstruct(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n, Exec exec) {
  return reconstruct(sys, x, linspace(n), linspace(n), exec);
}

std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> boundary_samples(const Geometry& g, int n_points) {
  const int walls = g.is_annulus() ? 4 : 3;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> out;
  for (int w = 0; w < walls; ++w) {
    const int n = n_points / walls + (w < n_points % walls ? 1 : 0);
    if (n == 0) continue;
    Eigen::VectorXd along(n);
    for (int i = 0; i < n; ++i) along[i] = -1.0 + 2.0 * (i + 0.5) / n;
    const Eigen::VectorXd at = Eigen::VectorXd::Constant(1, w == 1 || w == 2 ? 1.0 : -1.0);
    if (w < 2)
      out.emplace_back(along, at);
    else
      out.emplace_back(at, along);
  }
  return out;
}

double no_slip_residual(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n_points) {
  const double scale = max_speed(raw_fields(sys, x, linspace(41), linspace(41), Exec::parallel, false));
  double worst = 0;
  for (const auto& [t, v] : boundary_samples(sys.geometry, n_points)) {
    const RawFields f = raw_fields(sys, x, t, v, Exec::parallel, false);
    for (Eigen::Index i = 0; i < f.up.size(); ++i) {
      const Cylindrical c = to_cylindrical({f.up(i), f.um(i), f.u0(i)});
      worst = std::max({worst, std::abs(c.s), std::abs(c.phi), std::abs(c.z)});
    }
  }
  return scale > 0 ? worst / scale : worst;
}

DivergenceCheck spectral_divergence(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n) {
  const Eigen::VectorXd t = linspace(n), v = linspace(n);
  const BasisSpec target = sys.recombined.with_alpha(1.0);
  Eigen::VectorXcd div = Eigen::VectorXcd::Zero(target.truncation().size());
  DivergenceCheck out;
  for (int sg : ops3d::vector_spins()) {
    const BasisSpec us = sys.recombined.with_sigma(sg);
    const Eigen::VectorXcd U = recombined_velocity(sys, x, sg);
    for (int delta : {-1, 0, 1}) {
      if (std::abs(sg + delta) > 2) continue;
      const ops3d::BlockOperator D = ops3d::fundamental(us, delta);
      const Eigen::VectorXcd d = D.apply(U);
      out.max_gradient = std::max(out.max_gradient, basis3d::synthesize_at(D.target(), d, t, v).cwiseAbs().maxCoeff());
      if (delta == -sg) div += d;
    }
  }
  out.max_divergence = basis3d::synthesize_at(target, div, t, v).cwiseAbs().maxCoeff();
  return out;
}

nlohmann::json to_json(const SystemAssembly& sys, const EigenPair& p) {
  nlohmann::json j;
  j["geometry"] = geometry::to_json(sys.geometry);
  j["m"] = sys.m;
  j["ekman"] = num(sys.ekman);
  j["diffusion"] = sys.options.diffusion;
  j["L_max"] = sys.options.L_max;
  j["N_max"] = sys.options.N_max;
  j["size"] = sys.size();
  j["lambda"] = {{"re", num(p.lambda.real())}, {"im", num(p.lambda.imag())}};
  j["residual"] = num(p.residual);
  j["converged"] = p.converged;
  return j;
}

std::string grid_csv(const ModeFields& f) {
  std::ostringstream os;
  os.precision(17);
  os << "t,v,s,z,us_re,us_im,uphi_re,uphi_im,uz_re,uz_im,p_re,p_im\n";
  for (Eigen::Index i = 0; i < f.t.size(); ++i)
    for (Eigen::Index j = 0; j < f.v.size(); ++j) {
      os << f.t[i] << ',' << f.v[j] << ',' << f.s(i, j) << ',' << f.z(i, j);
      for (const auto* m : {&f.u_s, &f.u_phi, &f.u_z, &f.p}) os << ',' << (*m)(i, j).real() << ',' << (*m)(i, j).imag();
      os << '\n';
    }
  return os.str();
}

Family coreaboloid_rpm_family(std::vector<double> rpm, const geometry::CoreaboloidParams& p) {
  return {"coreaboloid_rpm", "rpm", [p](double r) { return geometry::coreaboloid_geometry(r, p); }, std::move(rpm)};
}

Family spheroid_height_family(std::vector<double> H) {
  return {"spheroid_height", "H", [](double h) { return geometry::spheroid_geometry(h); }, std::move(H)};
}

Family coreaboloid_inner_radius_family(double rpm, std::vector<double> S_i, const geometry::CoreaboloidParams& p) {
  return {"coreaboloid_inner_radius", "S_i",
          [rpm, p](double si) {
            geometry::CoreaboloidParams q = p;
            q.S_i = si;
            return geometry::coreaboloid_geometry(rpm, q);
          },
          std::move(S_i)};
}

Family excised_sphere_family(std::vector<double> S_i) {
  return {"excised_sphere_inner_radius", "S_i", [](double si) { return geometry::excised_sphere_geometry(si); },
          std::move(S_i)};
}

namespace {

struct Step {
  EigenPair pair;
  int substeps = 0;
  bool jump = false;
};

class Tracker {
 public:
  Tracker(const Family& f, int m, const ScanOptions& opt) : f_(f), m_(m), opt_(opt) {}

  EigenPair solve(double p, cd shift) const {
    SolveOptions so = opt_.solve;
    so.shift = shift;
    return fundamental_mode(assemble(f_.geometry(p), m_, opt_.system), so);
  }

  cd seed(double p) const {
    SystemOptions so = opt_.system;
    so.L_max = opt_.seed_L_max;
    so.N_max = opt_.seed_N_max;
    cd s = fundamental_seed(assemble(f_.geometry(p), m_, so), opt_.seed_radius);
    // A shift sitting on an eigenvalue of the working system cannot be factored.
    if (so.L_max == opt_.system.L_max && so.N_max == opt_.system.N_max) s *= 1.0 + 1e-6;
    return s;
  }

  bool jumped(cd from, cd to) const { return std::abs(to - from) > opt_.jump_threshold * std::abs(from); }

  /// Continue from (p0, lambda0) to p1, bisecting steps that move too far.
  Step advance(double p0, cd lambda0, double p1, int depth) const {
    Step s{solve(p1, lambda0)};
    if (!jumped(lambda0, s.pair.lambda)) return s;
    if (depth == 0) {
      s.jump = true;
      return s;
    }
    const double mid = 0.5 * (p0 + p1);
    const Step a = advance(p0, lambda0, mid, depth - 1);
    Step b = advance(mid, a.pair.lambda, p1, depth - 1);
    b.substeps += a.substeps + 1;
    b.jump = b.jump || a.jump;
    return b;
  }

 private:
  const Family& f_;
  int m_;
  const ScanOptions& opt_;
};

}  // namespace

std::vector<TracePoint> scan(const Family& family, int m, const ScanOptions& opt) {
  const Tracker tracker(family, m, opt);
  std::vector<TracePoint> trace;
  std::optional<cd> last;
  double last_p = 0;
  for (double p : family.values) {
    TracePoint tp;
    tp.parameter = p;
    try {
      Step s;
      if (!last) {
        tp.shift = opt.seed ? *opt.seed : tracker.seed(p);
        s.pair = tracker.solve(p, tp.shift);
      } else {
        tp.shift = *last;
        s = tracker.advance(last_p, *last, p, opt.max_bisections);
      }
      tp.lambda = s.pair.lambda;
      tp.residual = s.pair.residual;
      tp.converged = s.pair.converged;
      tp.substeps = s.substeps;
      tp.jump = s.jump;
      last = tp.lambda;
      last_p = p;
    } catch (const Error& e) {
      tp.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    trace.push_back(tp);
  }
  return trace;
}

std::vector<std::vector<TracePoint>> scan_all(const std::vector<Family>& sweeps, int m, const ScanOptions& opt) {
  const int n = static_cast<int>(sweeps.size());
  std::vector<std::vector<TracePoint>> out(n);
  const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (opt.exec == Exec::parallel)
  for (int i = 0; i < n; ++i) out[i] = scan(sweeps[i], m, opt);
  return out;
}

double relative_spread(const std::vector<TracePoint>& trace) {
  double spread = 0, top = 0;
  for (const auto& a : trace) {
    if (!a.converged) continue;
    top = std::max(top, std::abs(a.lambda));
    for (const auto& b : trace)
      if (b.converged) spread = std::max(spread, std::abs(a.lambda - b.lambda));
  }
  return top > 0 ? spread / top : 0.0;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream os;
  os << "parameter,re,im,shift_re,shift_im,residual,converged,substeps,jump,error\n";
  for (const auto& p : trace) {
    std::string err = p.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << num(p.parameter) << ',' << num(p.lambda.real()) << ',' << num(p.lambda.imag()) << ','
       << num(p.shift.real()) << ',' << num(p.shift.imag()) << ',' << num(p.residual) << ','
       << (p.converged ? 1 : 0) << ',' << p.substeps << ',' << (p.jump ? 1 : 0) << ",\"" << err << "\"\n";
  }
  return os.str();
}

}  // namespace gyro::eigen
