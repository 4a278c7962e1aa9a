#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "gyro/basis3d/transforms.hpp"
#include "gyro/eigen/modes.hpp"
#include "gyro/error.hpp"
#include "gyro/geometry/geometry.hpp"
#include "gyro/ops3d/operators.hpp"

using namespace gyro::eigen;
using gyro::Error;
using gyro::ErrorKind;

namespace {

// Dense copy of the (equation, unknown) block.
Eigen::MatrixXcd block(const SparseC& A, const Segment& row, const Segment& col) {
  return Eigen::MatrixXcd(A).block(row.offset, col.offset, row.size, col.size);
}

const Segment& equation(const SystemAssembly& sys, const std::string& name) {
  for (const auto& e : sys.equations)
    if (e.name == name) return e;
  FAIL("no equation " << name);
  return sys.equations.front();
}

// Adds back +2i sigma M on the momentum rows, leaving the Stokes problem.
void drop_coriolis(SystemAssembly& sys) {
  std::vector<Eigen::Triplet<cd>> t;
  for (const auto& e : sys.equations)
    if (e.name.rfind("momentum", 0) == 0 && e.sigma != 0)
      for (int i = 0; i < e.size; ++i) t.emplace_back(e.offset + i, e.offset + i, cd(0.0, 2.0 * e.sigma));
  SparseC D(sys.size(), sys.size());
  D.setFromTriplets(t.begin(), t.end());
  sys.L = sys.L + D * sys.M;
}

SystemAssembly sphere_stokes(int L) {
  SystemOptions o;
  o.ekman = 1.0;
  o.L_max = L;
  o.N_max = L;
  SystemAssembly sys = assemble(gyro::geometry::spheroid_geometry(1.0), 1, o);
  drop_coriolis(sys);
  return sys;
}

// Unit-sphere no-slip Stokes decay rates: -k^2 with j_l(k) = 0.
std::vector<double> stokes_rates(double limit) {
  std::vector<double> out;
  for (int l = 1; l <= 12; ++l)
    for (int n = 1; n <= 6; ++n) {
      const double k = boost::math::cyl_bessel_j_zero(l + 0.5, n);
      if (k * k <= limit) out.push_back(-k * k);
    }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SystemAssembly small_coreaboloid(int m = 14) {
  SystemOptions o;
  o.ekman = 1e-3;
  o.L_max = 6;
  o.N_max = 12;
  return assemble(gyro::geometry::coreaboloid_geometry(60.0), m, o);
}

SolveOptions near(cd shift, int n) {
  SolveOptions s;
  s.shift = shift;
  s.n_modes = n;
  return s;
}

}  // namespace

TEST_CASE("sphere Stokes eigenvalues are squared spherical Bessel zeros") {
  const SystemAssembly sys = sphere_stokes(14);
  const auto oracle = stokes_rates(120.0);
  const EigenSolution sol = solve_targeted(sys, near(-35.0, 6));
  REQUIRE(sol.modes.size() == 6);
  std::vector<bool> hit(oracle.size(), false);
  for (const auto& p : sol.modes) {
    CHECK(p.converged);
    CHECK(std::abs(p.lambda.imag()) <= 1e-8 * std::abs(p.lambda));
    int best = 0;
    for (int i = 0; i < static_cast<int>(oracle.size()); ++i)
      if (std::abs(oracle[i] - p.lambda) < std::abs(oracle[best] - p.lambda)) best = i;
    INFO("lambda = " << p.lambda << ", nearest rate " << oracle[best]);
    CHECK(std::abs(p.lambda - oracle[best]) <= 1e-9 * std::abs(oracle[best]));
    hit[best] = true;
  }
  // -20.19 (l = 1), -33.22 (l = 2), -48.83 (l = 3)
  for (int i = 0; i < 3; ++i) CHECK(hit[i]);
}

TEST_CASE("sphere Stokes modes satisfy no-slip and converge to zero divergence") {
  std::vector<double> div;
  const double k = boost::math::cyl_bessel_j_zero(1.5, 1);
  for (int L : {8, 14}) {
    const SystemAssembly sys = sphere_stokes(L);
    const EigenPair p = solve_targeted(sys, near(-19.0, 1)).modes.at(0);
    CHECK(p.residual <= 1e-8);
    CHECK(no_slip_residual(sys, p.x) <= 1e-9);
    div.push_back(spectral_divergence(sys, p.x).relative());
    CHECK(std::abs(p.lambda + k * k) <= (L == 8 ? 1e-6 : 1e-12) * k * k);
  }
  CHECK(div[0] > 100.0 * div[1]);
  CHECK(div[1] <= 1e-7);
}

TEST_CASE("mass matrix vanishes on the divergence rows and the tau columns") {
  const SystemAssembly sys = small_coreaboloid();
  REQUIRE(sys.L.rows() == sys.L.cols());
  REQUIRE(sys.M.rows() == sys.L.rows());
  REQUIRE(sys.M.cols() == sys.L.cols());
  const Eigen::MatrixXcd M(sys.M);
  const Segment& div = equation(sys, "divergence");
  CHECK(M.middleRows(div.offset, div.size).cwiseAbs().maxCoeff() == 0.0);
  for (const std::string name : {"P", "tau+", "tau-", "tau0", "tau_div"}) {
    const Segment& s = sys.unknown(name);
    CHECK(M.middleCols(s.offset, s.size).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(sys.n_tau_per_equation == sys.unknown("tau_div").size);
  CHECK(sys.unknown("tau+").size == equation(sys, "momentum+").size - sys.unknown("V+").size);
}

TEST_CASE("Coriolis couples only diagonal spin blocks with -2i and +2i") {
  SystemOptions o;
  o.ekman = 1e-3;
  o.L_max = 6;
  o.N_max = 12;
  o.diffusion = false;
  const SystemAssembly sys = assemble(gyro::geometry::coreaboloid_geometry(60.0), 14, o);
  const std::vector<std::pair<std::string, std::string>> rows{{"momentum+", "V+"}, {"momentum-", "V-"}, {"momentum0", "V0"}};
  for (const auto& [eq, _] : rows) {
    const Segment& e = equation(sys, eq);
    for (const auto& [__, var] : rows) {
      const Segment& v = sys.unknown(var);
      const Eigen::MatrixXcd Lb = block(sys.L, e, v), Mb = block(sys.M, e, v);
      if (e.sigma != v.sigma) {
        CHECK(Lb.cwiseAbs().maxCoeff() == 0.0);
        CHECK(Mb.cwiseAbs().maxCoeff() == 0.0);
        continue;
      }
      // Without diffusion the velocity block is the bare conversion cascade times -2i sigma.
      const cd coeff(0.0, -2.0 * e.sigma);
      CHECK((Lb - coeff * Mb).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
      CHECK(Mb.cwiseAbs().maxCoeff() > 0.0);
      if (e.sigma == 0) CHECK(Lb.cwiseAbs().maxCoeff() == 0.0);
    }
  }

  // The viscous part stays on the diagonal spin blocks too.
  const SystemAssembly full = small_coreaboloid();
  CHECK(block(full.L, equation(full, "momentum+"), full.unknown("V-")).cwiseAbs().maxCoeff() == 0.0);
  CHECK(block(full.L, equation(full, "momentum0"), full.unknown("V+")).cwiseAbs().maxCoeff() == 0.0);
  const Segment& e = equation(full, "momentum0");
  const Segment& v = full.unknown("V0");
  CHECK(block(full.L, e, v).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("viscous velocity block is E times the spin Laplacian of the recombined field") {
  const SystemAssembly sys = small_coreaboloid();
  for (int sg : {+1, -1, 0}) {
    const std::string suffix = sg > 0 ? "+" : sg < 0 ? "-" : "0";
    const Segment& e = equation(sys, "momentum" + suffix);
    const Segment& v = sys.unknown("V" + suffix);
    const auto us = sys.recombined.with_sigma(sg);
    const auto recomb = gyro::ops3d::conversion_adjoint(sys.velocity.with_sigma(sg));
    const Eigen::MatrixXcd lap = Eigen::MatrixXd((gyro::ops3d::spin_laplacian(us) * recomb).to_sparse()).cast<cd>();
    const Eigen::MatrixXcd Lb = block(sys.L, e, v), Mb = block(sys.M, e, v);
    const Eigen::MatrixXcd visc = Lb + cd(0.0, 2.0 * sg) * Mb;
    CHECK((visc - sys.ekman * lap).cwiseAbs().maxCoeff() <= 1e-12 * lap.cwiseAbs().maxCoeff() * sys.ekman);
  }
}

TEST_CASE("Coreaboloid fundamental mode meets the residual, no-slip and damping properties") {
  SystemOptions o;
  o.ekman = 1e-3;
  o.L_max = 8;
  o.N_max = 16;
  const SystemAssembly sys = assemble(gyro::geometry::coreaboloid_geometry(60.0), 14, o);
  EigenSolution record;
  const EigenPair p = fundamental_mode(sys, near({-0.5, 0.2}, 6), &record);
  CHECK(p.converged);
  CHECK(p.residual <= 1e-8);
  CHECK(p.lambda.real() < 0.0);
  for (const auto& q : record.modes) {
    CHECK(q.residual == doctest::Approx(relative_residual(sys, q.lambda, q.x)));
    if (q.converged) CHECK(q.lambda.real() <= p.lambda.real());
  }
  CHECK(no_slip_residual(sys, p.x, 50) <= 1e-9);

  // Walls sampled directly: lids v = +-1, inner wall t = -1 and outer wall t = 1.
  const ModeFields interior = reconstruct(sys, p.x, 41);
  const double umax = std::max({interior.u_s.cwiseAbs().maxCoeff(), interior.u_phi.cwiseAbs().maxCoeff(),
                                interior.u_z.cwiseAbs().maxCoeff()});
  REQUIRE(umax > 0.0);
  const Eigen::VectorXd span = Eigen::VectorXd::LinSpaced(13, -1.0, 1.0);
  const Eigen::VectorXd ends = (Eigen::VectorXd(2) << -1.0, 1.0).finished();
  for (const auto& f : {reconstruct(sys, p.x, span, ends), reconstruct(sys, p.x, ends, span)}) {
    const double wall = std::max({f.u_s.cwiseAbs().maxCoeff(), f.u_phi.cwiseAbs().maxCoeff(), f.u_z.cwiseAbs().maxCoeff()});
    // Normalization differs between grids; compare in raw units.
    CHECK(wall / std::abs(f.normalization) <= 1e-9 * umax / std::abs(interior.normalization));
  }
}

TEST_CASE("reconstructed pressure is normalized with a real positive peak") {
  const SystemAssembly sys = small_coreaboloid();
  const EigenPair p = fundamental_mode(sys, near({-0.5, 0.2}, 4));
  const ModeFields f = reconstruct(sys, p.x, 25);
  Eigen::Index i = 0, j = 0;
  CHECK(f.p.cwiseAbs().maxCoeff(&i, &j) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.p(i, j).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(f.p(i, j).imag()) <= 1e-14);
  CHECK(f.s(0, 0) == doctest::Approx(sys.geometry.S_i));
  CHECK(f.s(24, 0) == doctest::Approx(sys.geometry.S_o));
  CHECK(f.z(3, 0) == doctest::Approx(0.0).epsilon(1e-14));

  const std::string csv = grid_csv(f);
  CHECK(csv.rfind("t,v,s,z,us_re,us_im,uphi_re,uphi_im,uz_re,uz_im,p_re,p_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 25 * 25);

  const auto j_out = to_json(sys, p);
  CHECK(j_out.at("m") == 14);
  CHECK(j_out.at("L_max") == 6);
  CHECK(j_out.contains("residual"));
  CHECK(j_out.at("geometry").at("kind") == "annulus");
}

TEST_CASE("m -> -m conjugates the spectrum") {
  const SystemAssembly a = small_coreaboloid(14), b = small_coreaboloid(-14);
  const cd shift{-0.6, 0.4};
  const EigenSolution sa = solve_targeted(a, near(shift, 4));
  const EigenSolution sb = solve_targeted(b, near(std::conj(shift), 4));
  REQUIRE(sa.modes.size() == sb.modes.size());
  for (size_t i = 0; i < sa.modes.size(); ++i) {
    CHECK(sa.modes[i].converged);
    CHECK(std::abs(sa.modes[i].lambda - std::conj(sb.modes[i].lambda)) <= 1e-10 * std::abs(sa.modes[i].lambda));
  }
}

TEST_CASE("spinor and cylindrical components round trip") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Cylindrical c{{d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}};
    const Cylindrical r = to_cylindrical(to_spinor(c));
    worst = std::max({worst, std::abs(r.s - c.s), std::abs(r.phi - c.phi), std::abs(r.z - c.z)});
    // Unitary: the squared norm is preserved.
    const Spinor s = to_spinor(c);
    CHECK(std::norm(s.plus) + std::norm(s.minus) + std::norm(s.zero) ==
          doctest::Approx(std::norm(c.s) + std::norm(c.phi) + std::norm(c.z)));
  }
  CHECK(worst <= 1e-14);
  // e+ = (e_S - i e_Phi)/sqrt 2 carries u_S = (u+ + u-)/sqrt 2.
  const Cylindrical c = to_cylindrical({1.0, 0.0, 0.0});
  CHECK(std::abs(c.s - std::sqrt(0.5)) <= 1e-16);
  CHECK(std::abs(c.phi - cd(0.0, -std::sqrt(0.5))) <= 1e-16);
}

TEST_CASE("solver errors and options") {
  SUBCASE("singular shifted matrix is a shift collision") {
    SystemAssembly sys = small_coreaboloid();
    sys.L = SparseC(10, 10);
    sys.L.setIdentity();
    sys.M = sys.L;
    try {
      (void)solve_targeted(sys, near(1.0, 1));
      FAIL("expected a shift collision");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::shift_collision);
    }
  }
  SUBCASE("non-positive Ekman number") {
    SystemOptions o;
    o.ekman = 0.0;
    CHECK_THROWS_AS(assemble(gyro::geometry::spheroid_geometry(1.0), 2, o), Error);
  }
  SUBCASE("truncation too small for the cascade") {
    SystemOptions o;
    o.L_max = 2;
    o.N_max = 2;
    try {
      (void)assemble(gyro::geometry::spheroid_geometry(1.0), 2, o);
      FAIL("expected an assembly error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::assembly);
    }
  }
  SUBCASE("tau flavors all give square systems") {
    for (auto f : {gyro::ops3d::TauFlavor::conversion, gyro::ops3d::TauFlavor::double_conversion,
                   gyro::ops3d::TauFlavor::identity}) {
      SystemOptions o;
      o.ekman = 1e-3;
      o.L_max = 6;
      o.N_max = 12;
      o.tau = f;
      const SystemAssembly sys = assemble(gyro::geometry::coreaboloid_geometry(60.0), 14, o);
      CHECK(sys.L.rows() == sys.L.cols());
      const EigenPair p = fundamental_mode(sys, near({-0.5, 0.2}, 4));
      CHECK(p.residual <= 1e-8);
    }
  }
  SUBCASE("seeded runs are deterministic") {
    const SystemAssembly sys = small_coreaboloid();
    const EigenSolution a = solve_targeted(sys, near({-0.5, 0.2}, 3));
    const EigenSolution b = solve_targeted(sys, near({-0.5, 0.2}, 3));
    REQUIRE(a.modes.size() == b.modes.size());
    for (size_t i = 0; i < a.modes.size(); ++i) CHECK(a.modes[i].lambda == b.modes[i].lambda);
  }
}

TEST_CASE("dense seed and the spurious filter") {
  const SystemAssembly sys = small_coreaboloid();
  const auto spec = dense_spectrum(sys, cd(0.05, 0.0));
  const cd seed = fundamental_seed(sys);
  CHECK(seed.real() < 0.0);
  for (cd z : spec)
    if (std::abs(z) <= 4.0) CHECK(z.real() <= seed.real());
  const auto kept = stable_eigenvalues({1.0, cd(0.0, 2.0)}, {1.0005, cd(0.0, 2.1), 7.0});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == cd(1.0005));
}

TEST_CASE("scan tracks a smooth trace and records failures per point") {
  ScanOptions o;
  o.system.ekman = 1e-3;
  o.system.L_max = 6;
  o.system.N_max = 12;
  o.seed = cd(-0.5, 0.2);
  const Family f = coreaboloid_rpm_family({56.0, 60.0, 64.0, 70.0});
  const auto trace = scan(f, 14, o);
  REQUIRE(trace.size() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(trace[i].converged);
    CHECK_FALSE(trace[i].jump);
    CHECK(trace[i].lambda.real() < 0.0);
    CHECK(trace[i].residual <= 1e-8);
  }
  CHECK(trace[1].shift == trace[0].lambda);
  CHECK(trace[3].error.rfind("geometry-singular", 0) == 0);
  CHECK_FALSE(trace[3].converged);

  const std::string csv = trace_csv(trace);
  CHECK(csv.rfind("parameter,re,im,shift_re,shift_im,residual,converged,substeps,jump,error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  SUBCASE("a zero threshold without bisection flags every step") {
    ScanOptions strict = o;
    strict.jump_threshold = 0.0;
    strict.max_bisections = 0;
    const auto t = scan(coreaboloid_rpm_family({56.0, 60.0}), 14, strict);
    CHECK_FALSE(t[0].jump);
    CHECK(t[1].jump);
  }
  SUBCASE("bisection inserts substeps") {
    ScanOptions tight = o;
    tight.jump_threshold = 0.02;
    tight.max_bisections = 2;
    const auto t = scan(coreaboloid_rpm_family({56.0, 64.0}), 14, tight);
    CHECK(t[1].substeps > 0);
    CHECK(t[1].converged);
  }
  SUBCASE("concurrent sweeps match serial sweeps") {
    const std::vector<Family> sweeps{coreaboloid_rpm_family({56.0, 60.0}), coreaboloid_rpm_family({60.0, 64.0})};
    ScanOptions serial = o;
    serial.exec = gyro::Exec::serial;
    ScanOptions parallel = o;
    parallel.workers = 2;
    const auto a = scan_all(sweeps, 14, serial), b = scan_all(sweeps, 14, parallel);
    REQUIRE(a.size() == 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(a[i][j].lambda == b[i][j].lambda);
  }
}

TEST_CASE("relative spread of a trace") {
  std::vector<TracePoint> t(3);
  t[0].lambda = {-1.0, 1.0};
  t[1].lambda = {-1.0, 1.2};
  t[2].lambda = {-5.0, 0.0};
  t[0].converged = t[1].converged = true;
  CHECK(relative_spread(t) == doctest::Approx(0.2 / std::abs(cd(-1.0, 1.2))));
}

TEST_CASE("boundary samples cover every wall") {
  const auto ann = boundary_samples(gyro::geometry::coreaboloid_geometry(60.0), 50);
  const auto cyl = boundary_samples(gyro::geometry::spheroid_geometry(1.0), 50);
  auto count = [](const auto& s) {
    int n = 0;
    for (const auto& [t, v] : s) n += static_cast<int>(t.size() * v.size());
    return n;
  };
  CHECK(ann.size() == 4);
  CHECK(cyl.size() == 3);
  CHECK(count(ann) == 50);
  CHECK(count(cyl) == 50);
}
