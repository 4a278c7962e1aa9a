#include "gyro/eigen/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gyro/error.hpp"

namespace gyro::eigen {

namespace {

using Dense = Eigen::MatrixXcd;

double inf_norm(const SparseC& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseC::InnerIterator it(m, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

Eigen::PartialPivLU<Dense> factor(const SystemAssembly& sys, cd shift) {
  const Dense A = Dense(sys.L) - shift * Dense(sys.M);
  Eigen::PartialPivLU<Dense> lu(A);
  const auto d = lu.matrixLU().diagonal().cwiseAbs();
  if (!(d.minCoeff() > 1e-14 * d.maxCoeff()))
    throw Error(ErrorKind::shift_collision, "L - shift M is singular to working precision");
  return lu;
}

}  // namespace

double relative_residual(const SystemAssembly& sys, cd lambda, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd r = sys.L * x - lambda * (sys.M * x);
  return r.norm() / (inf_norm(sys.L) * x.norm());
}

EigenSolution solve_targeted(const SystemAssembly& sys, const SolveOptions& opt) {
  const int n = sys.size();
  const int want = std::max(1, opt.n_modes);
  const int k = std::min(n - 1, std::max(opt.krylov_dim, 2 * want + 10));
  const auto lu = factor(sys, opt.shift);
  EigenSolution out;
  auto apply = [&](const Eigen::VectorXcd& x) {
    ++out.operator_applications;
    return Eigen::VectorXcd(lu.solve(Eigen::VectorXcd(sys.M * x)));
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd start(n);
  for (auto& z : start) z = {nd(rng), nd(rng)};
  // One application removes components that M annihilates.
  start = apply(start);

  std::vector<EigenPair> pairs;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    out.restarts = restart;
    Dense V = Dense::Zero(n, k + 1);
    Dense H = Dense::Zero(k + 1, k);
    V.col(0) = start.normalized();
    int steps = k;
    for (int j = 0; j < k; ++j) {
      Eigen::VectorXcd w = apply(V.col(j));
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd h = V.leftCols(j + 1).adjoint() * w;
        w -= V.leftCols(j + 1) * h;
        H.col(j).head(j + 1) += h;
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) < 1e-14 * H.col(j).norm()) {
        steps = j + 1;
        break;
      }
      V.col(j + 1) = w / H(j + 1, j);
    }
    Eigen::ComplexEigenSolver<Dense> es(H.topLeftCorner(steps, steps));
    std::vector<int> order(steps);
    for (int i = 0; i < steps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]); });

    pairs.clear();
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(n);
    int good = 0;
    for (int i = 0; i < steps && static_cast<int>(pairs.size()) < want + 4; ++i) {
      const cd mu = es.eigenvalues()[order[i]];
      if (std::abs(mu) == 0.0) break;
      EigenPair p;
      p.x = V.leftCols(steps) * es.eigenvectors().col(order[i]);
      p.x.normalize();
      p.lambda = opt.shift + 1.0 / mu;
      p.residual = relative_residual(sys, p.lambda, p.x);
      // Inverse-iteration polish with the same factorization.
      for (int it = 0; it < 3 && p.residual > opt.tol; ++it) {
        Eigen::VectorXcd y = apply(p.x);
        const cd m2 = p.x.dot(y);
        p.x = y.normalized();
        p.lambda = opt.shift + 1.0 / m2;
        p.residual = relative_residual(sys, p.lambda, p.x);
      }
      p.converged = p.residual <= opt.tol;
      if (p.converged) ++good;
      pairs.push_back(p);
      if (static_cast<int>(pairs.size()) <= want) next += p.x;
    }
    if (good >= want || steps < k) break;
    start = next;
  }

  std::sort(pairs.begin(), pairs.end(),
            [&](const EigenPair& a, const EigenPair& b) { return std::abs(a.lambda - opt.shift) < std::abs(b.lambda - opt.shift); });
  for (auto& p : pairs) {
    if (static_cast<int>(out.modes.size()) >= want) break;
    if (p.converged && p.lambda.real() > 0) {
      ++out.spurious;
      continue;
    }
    out.modes.push_back(std::move(p));
  }
  int ok = 0;
  for (const auto& p : out.modes) ok += p.converged;
  out.partial = ok < want;
  return out;
}

std::vector<cd> dense_spectrum(const SystemAssembly& sys, cd shift) {
  const auto lu = factor(sys, shift);
  const Dense A = lu.solve(Dense(sys.M));
  Eigen::ComplexEigenSolver<Dense> es(A, false);
  const auto& mu = es.eigenvalues();
  const double top = mu.cwiseAbs().maxCoeff();
  std::vector<cd> out;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (std::abs(mu[i]) > 1e-10 * top) out.push_back(shift + 1.0 / mu[i]);
  return out;
}

std::vector<cd> stable_eigenvalues(const std::vector<cd>& coarse, const std::vector<cd>& fine, double rel_tol) {
  std::vector<cd> out;
  for (cd f : fine) {
    double best = 1e300;
    for (cd c : coarse) best = std::min(best, std::abs(f - c));
    if (best <= rel_tol * std::abs(f)) out.push_back(f);
  }
  return out;
}

cd fundamental_seed(const SystemAssembly& sys, double radius) {
  cd best{0, 0};
  bool found = false;
  for (cd z : dense_spectrum(sys, cd(0.05, 0.0)))
    if (z.real() < 0 && std::abs(z) <= radius && (!found || z.real() > best.real())) {
      best = z;
      found = true;
    }
  if (!found) throw Error(ErrorKind::numerical, "no damped eigenvalue inside the seeding radius");
  return best;
}

EigenPair fundamental_mode(const SystemAssembly& sys, const SolveOptions& opt, EigenSolution* record) {
  EigenSolution sol = solve_targeted(sys, opt);
  const EigenPair* best = nullptr;
  for (const auto& p : sol.modes)
    if (p.converged && (!best || p.lambda.real() > best->lambda.real())) best = &p;
  if (!best)
    throw Error(ErrorKind::numerical, "no mode converged near the shift after " + std::to_string(sol.restarts) +
                                          " restarts and " + std::to_string(sol.operator_applications) +
                                          " operator applications");
  EigenPair out = *best;
  if (record) *record = std::move(sol);
  return out;
}

}  // namespace gyro::eigen
