#include <benchmark/benchmark.h>

#include <random>

#include "gyro/basis3d/transforms.hpp"
#include "gyro/eigen/modes.hpp"
#include "gyro/geometry/geometry.hpp"
#include "gyro/ops3d/operators.hpp"
#include "gyro/polyalg/recurrence.hpp"

using namespace gyro;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

basis3d::BasisSpec spec(int L, int N) {
  basis3d::BasisSpec s;
  s.geometry = geometry::coreaboloid_geometry(60.0);
  s.m = 14;
  s.L_max = L;
  s.N_max = N;
  return s;
}

Eigen::VectorXcd random_coeffs(int n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  Eigen::VectorXcd c(n);
  for (auto& x : c) x = {d(rng), d(rng)};
  return c;
}

void recurrence_evaluation(benchmark::State& state) {
  const auto rec = polyalg::recurrence_for_weight(polyalg::WeightSpec(0, 2, {{polyalg::Polynomial({0.5, 0.25}), 7.0}}), 200);
  const Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(20000, -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(polyalg::evaluate(rec, pts, 199, exec_of(state)));
}

void grid_synthesis(benchmark::State& state) {
  const auto s = spec(16, 32);
  const Eigen::VectorXcd c = random_coeffs(s.truncation().size());
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(121, -1, 1), v = Eigen::VectorXd::LinSpaced(121, -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(basis3d::synthesize_at(s, c, t, v, exec_of(state)));
}

void operator_assembly(benchmark::State& state) {
  const auto s = spec(20, 40);
  (void)ops3d::fundamental(s, 1);  // warm the hierarchy cache
  for (auto _ : state) {
    benchmark::DoNotOptimize(ops3d::fundamental(s, 1, ops3d::Scaling::physical, exec_of(state)));
    benchmark::DoNotOptimize(ops3d::conversion(s, ops3d::ClosurePolicy::require, exec_of(state)));
  }
}

void scan_fan_out(benchmark::State& state) {
  eigen::ScanOptions o;
  o.system.ekman = 1e-3;
  o.system.L_max = 6;
  o.system.N_max = 12;
  o.seed_L_max = 6;
  o.seed_N_max = 12;
  o.solve.n_modes = 4;
  o.exec = exec_of(state);
  const std::vector<eigen::Family> fams{eigen::spheroid_height_family({0.4, 0.5}), eigen::excised_sphere_family({0.3, 0.35})};
  for (auto _ : state) benchmark::DoNotOptimize(eigen::scan_all(fams, 2, o));
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP kernel.
BENCHMARK(recurrence_evaluation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_synthesis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(operator_assembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(scan_fan_out)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
