#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gyro/eigen/solver.hpp"
#include "gyro/exec.hpp"
#include "gyro/geometry/geometry.hpp"

namespace gyro::eigen {

struct Spinor {
  cd plus, minus, zero;
};
struct Cylindrical {
  cd s, phi, z;
};

/// u_S = (u+ + u-)/sqrt 2, u_Phi = i (u- - u+)/sqrt 2, u_Z = u0.
Cylindrical to_cylindrical(const Spinor& u);
Spinor to_spinor(const Cylindrical& u);

/// Slice of a global vector by unknown name.
Eigen::VectorXcd segment(const SystemAssembly& sys, const Eigen::VectorXcd& x, const std::string& name);
/// U = I^dagger V for spin sigma, on sys.recombined.with_sigma(sigma).
Eigen::VectorXcd recombined_velocity(const SystemAssembly& sys, const Eigen::VectorXcd& x, int sigma);

/// Physical fields on the tensor grid t x v, azimuthal phase omitted.
struct ModeFields {
  Eigen::VectorXd t, v;
  Eigen::MatrixXd s, z;
  Eigen::MatrixXcd u_s, u_phi, u_z, p;
  /// Factor applied to the raw fields: max |p| = 1, real and positive there.
  cd normalization{1.0, 0.0};
};

ModeFields reconstruct(const SystemAssembly& sys, const Eigen::VectorXcd& x, const Eigen::VectorXd& t,
                       const Eigen::VectorXd& v, Exec exec = Exec::parallel);
/// n points in t and in v, endpoints included.
ModeFields reconstruct(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n = 41, Exec exec = Exec::parallel);

/// Wall samples as (t values, v values) tensor pieces: lids v = +-1, outer wall t = 1, inner wall t = -1 on an annulus.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> boundary_samples(const Geometry& g, int n_points = 50);
/// Largest |u_S|, |u_Phi|, |u_Z| over boundary_samples, relative to max |u| on a 41 x 41 grid.
double no_slip_residual(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n_points = 50);

struct DivergenceCheck {
  double max_divergence = 0;
  /// Largest |D^delta U_sigma| over all spins and delta.
  double max_gradient = 0;
  double relative() const { return max_gradient > 0 ? max_divergence / max_gradient : max_divergence; }
};
/// Spectral divergence of the recombined velocity sampled on a 41 x 41 grid.
DivergenceCheck spectral_divergence(const SystemAssembly& sys, const Eigen::VectorXcd& x, int n = 41);

nlohmann::json to_json(const SystemAssembly& sys, const EigenPair& p);
/// Columns t,v,s,z,us_re,us_im,uphi_re,uphi_im,uz_re,uz_im,p_re,p_im; v fastest.
std::string grid_csv(const ModeFields& f);

/// One-parameter geometry family and the parameter values to report.
struct Family {
  std::string name;
  std::string parameter;
  std::function<Geometry(double)> geometry;
  std::vector<double> values;
};

/// Coreaboloid at the given rotation rates.
Family coreaboloid_rpm_family(std::vector<double> rpm, const geometry::CoreaboloidParams& p = {});
/// Spheroid h = H sqrt(1 - s^2) at the given heights.
Family spheroid_height_family(std::vector<double> H);
/// Coreaboloid at a fixed rate with the inner radius (m) varied.
Family coreaboloid_inner_radius_family(double rpm, std::vector<double> S_i, const geometry::CoreaboloidParams& p = {});
/// Unit sphere with the inner radius varied.
Family excised_sphere_family(std::vector<double> S_i);

struct ScanOptions {
  SystemOptions system;
  SolveOptions solve{{0.0, 0.0}, 8};
  /// First shift; the dense spectrum at the seeding truncation supplies it when absent.
  std::optional<cd> seed;
  int seed_L_max = 10;
  int seed_N_max = 20;
  double seed_radius = 4.0;
  /// A step whose lambda moves by more than this fraction of |lambda| is bisected, then flagged.
  double jump_threshold = 0.25;
  int max_bisections = 3;
  /// Sweeps run concurrently on this many OpenMP threads, 0 for the runtime default.
  int workers = 0;
  Exec exec = Exec::parallel;
};

struct TracePoint {
  double parameter = 0;
  cd shift;
  cd lambda;
  double residual = 0;
  bool converged = false;
  /// Intermediate parameter values solved to reach this point.
  int substeps = 0;
  bool jump = false;
  std::string error;
};

/// Fundamental mode along a sweep, each solve shifted to the previous eigenvalue.
std::vector<TracePoint> scan(const Family& family, int m, const ScanOptions& opt);
/// Independent sweeps, one per worker.
std::vector<std::vector<TracePoint>> scan_all(const std::vector<Family>& sweeps, int m, const ScanOptions& opt);

/// max |lambda_i - lambda_j| / max |lambda_i| over converged points.
double relative_spread(const std::vector<TracePoint>& trace);
/// Columns parameter,re,im,shift_re,shift_im,residual,converged,substeps,jump,error.
std::string trace_csv(const std::vector<TracePoint>& trace);

}  // namespace gyro::eigen
