#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gyro/error.hpp"
#include "gyro/polyalg/operators.hpp"
#include "gyro/polyalg/quadrature.hpp"
#include "gyro/polyalg/recurrence.hpp"
#include "gyro/polyalg/serialize.hpp"
#include "support/oracles.hpp"
#include "support/panels.hpp"

using namespace gyro::polyalg;
using gyro::Error;
using gyro::ErrorKind;

namespace {

Polynomial lin(double slope, double intercept) { return Polynomial::linear(slope, intercept); }

double max_coeff_diff(const Recurrence& x, const Recurrence& y, int n) {
  double d = 0.0;
  for (int k = 0; k < n; ++k) d = std::max({d, std::abs(x.alpha[k] - y.alpha[k]), std::abs(x.beta[k] - y.beta[k])});
  return d;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config;
}

// Inner product <u, v> of coefficient vectors expanded in rec, by an ample Gauss rule.
double inner(const Recurrence& rec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, int nq) {
  const auto q = gauss_quadrature(rec, nq);
  const int n = static_cast<int>(std::max(u.size(), v.size()));
  const Eigen::MatrixXd p = evaluate(rec, q.nodes, n - 1);
  Eigen::VectorXd fu = p.topRows(u.size()).transpose() * u;
  Eigen::VectorXd fv = p.topRows(v.size()).transpose() * v;
  return (fu.array() * fv.array() * q.weights.array()).sum();
}

}  // namespace

TEST_CASE("polynomial arithmetic and roots") {
  Polynomial p({4.0, 0.0, 1.0});
  CHECK(p.degree() == 2);
  CHECK(p(1.0) == doctest::Approx(5.0));
  auto r = p.roots();
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[1] - std::complex<double>(0.0, 2.0)) < 1e-13);
  Polynomial q = lin(1.0, 2.0).pow(3);
  CHECK(q.coeffs() == std::vector<double>{8.0, 12.0, 6.0, 1.0});
  CHECK(lin(2.0, 1.0).compose(lin(0.5, -0.5))(0.3) == doctest::Approx(0.3));
  CHECK(Polynomial({1.0, 2.0, 0.0}).degree() == 1);
}

TEST_CASE("classical Jacobi recurrence") {
  auto leg = classical_jacobi_recurrence(0, 0, 3);
  for (double a : leg.alpha) CHECK(std::abs(a) < 1e-15);
  CHECK(leg.beta[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(leg.mass == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(classical_jacobi_recurrence(-0.5, -0.5, 2).mass == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(kind_of([] { classical_jacobi_recurrence(-1.0, 0.0, 3); }) == ErrorKind::invalid_weight);

  // Independent oracle: Cholesky on adaptively integrated Gram matrices.
  for (auto [a, b] : {std::pair{0.0, 0.0}, {1.5, -0.5}, {-0.5, 3.0}}) {
    auto ref = oracle::reference_recurrence(WeightSpec(a, b), 8);
    auto rec = classical_jacobi_recurrence(a, b, 8);
    CHECK(max_coeff_diff(ref, rec, 8) < 1e-11);
    CHECK(std::abs(ref.mass - rec.mass) < 1e-12 * rec.mass);
  }
}

TEST_CASE("Stieltjes recurrence") {
  auto leg = classical_jacobi_recurrence(0, 0, 40);
  CHECK(max_coeff_diff(stieltjes_recurrence(WeightSpec(0, 0), 40), leg, 40) < 1e-13);

  WeightSpec lin_w(0, 0, {{lin(1, 2), 1.0}});
  auto lifted = christoffel_lift_linear(classical_jacobi_recurrence(0, 0, 41), {1.0, 2.0}, 40);
  CHECK(max_coeff_diff(stieltjes_recurrence(lin_w, 40), lifted, 40) < 1e-12);

  WeightSpec half(0, 0, {{lin(1, 2), 0.5}});
  auto st = stieltjes_recurrence(half, 4);
  const double m0 = oracle::integrate([&](double z) { return half(z); });
  const double m1 = oracle::integrate([&](double z) { return half(z) * z; }) / m0;
  const double m2 = oracle::integrate([&](double z) { return half(z) * z * z; }) / m0;
  CHECK(std::abs(st.beta[0] * st.beta[0] - (m2 - m1 * m1)) < 1e-10);
  CHECK(std::abs(st.mass - m0) < 1e-12);

  CHECK(kind_of([] { stieltjes_recurrence(WeightSpec(0, 0, {{lin(1, 0.5), 1.0}}), 4); }) == ErrorKind::invalid_weight);
}

TEST_CASE("linear Christoffel lift") {
  auto leg = classical_jacobi_recurrence(0, 0, 42);
  auto r = christoffel_lift_linear(leg, {1.0, 2.0}, 41);
  CHECK(r.mass == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(oracle::gram_error(r, 40) < 1e-12);
  auto p = evaluate(r, Eigen::VectorXd::Constant(1, 0.3), 0);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  // Degree exactly n: the n-th finite difference on n+1 points is nonzero and the (n+1)-th vanishes.
  Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(12, -0.9, 0.9);
  auto vals = evaluate(r, pts, 10);
  for (int n = 0; n <= 10; ++n) {
    Eigen::VectorXd v = vals.row(n).transpose();
    for (int k = 0; k < n + 1; ++k) {
      Eigen::VectorXd d(v.size() - 1);
      for (int i = 0; i + 1 < v.size(); ++i) d(i) = v(i + 1) - v(i);
      v = d;
      if (k == n - 1) CHECK(std::abs(v(0)) > 1e-8);
    }
    CHECK(v.cwiseAbs().maxCoeff() < 1e-9);
  }

  // Lift by a factor decreasing on the interval selects the other sign branch.
  auto down = christoffel_lift_linear(leg, {-1.0, 3.0}, 41);
  CHECK(down.mass == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(oracle::gram_error(down, 40) < 1e-12);

  CHECK(kind_of([&] { christoffel_lift_linear(leg, {1.0, 0.5}, 10); }) == ErrorKind::invalid_factor);
  CHECK(kind_of([&] { christoffel_lift_linear(leg, {1.0, 2.0}, 42); }) == ErrorKind::truncation);
}

TEST_CASE("quadratic Christoffel lift") {
  auto leg = classical_jacobi_recurrence(0, 0, 42);
  QuadraticFactor f{{0.0, 2.0}};
  auto r = christoffel_lift_quadratic(leg, f, 41);
  CHECK(r.mass == doctest::Approx(26.0 / 3.0).epsilon(1e-14));
  WeightSpec w(0, 0, {{Polynomial({4.0, 0.0, 1.0}), 1.0}});
  CHECK(max_coeff_diff(r, stieltjes_recurrence(w, 41), 41) < 1e-11);
  CHECK(oracle::gram_error(r, 40) < 1e-12);

  // Composition of two complex-conjugate linear lifts, done as two shifted LR steps on the
  // Jacobi matrix: J - z I = L U, J' = U L + z I.
  const int n = 40;
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    j(k, k) = leg.alpha[k];
    if (k + 1 < n) j(k, k + 1) = j(k + 1, k) = leg.beta[k];
  }
  std::complex<double> z0(-0.3, 0.8);
  for (std::complex<double> z : {z0, std::conj(z0)}) {
    Eigen::MatrixXcd a = j - z * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Identity(n, n), u = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      u(k, k) = a(k, k) - (k > 0 ? l(k, k - 1) * u(k - 1, k) : 0.0);
      if (k + 1 < n) {
        u(k, k + 1) = a(k, k + 1);
        l(k + 1, k) = a(k + 1, k) / u(k, k);
      }
    }
    j = u * l + z * Eigen::MatrixXcd::Identity(n, n);
  }
  auto rq = christoffel_lift_quadratic(leg, QuadraticFactor{z0}, 41);
  double err = 0.0;
  for (int k = 0; k < n - 4; ++k) {
    err = std::max(err, std::abs(j(k, k).real() - rq.alpha[k]));
    err = std::max(err, std::abs(std::sqrt((j(k, k + 1) * j(k + 1, k)).real()) - rq.beta[k]));
  }
  CHECK(err < 1e-11);
}

TEST_CASE("recurrence for weight") {
  WeightSpec cube(0, 0, {{lin(1, 2), 3.0}});
  auto leg = classical_jacobi_recurrence(0, 0, 44);
  auto three = christoffel_lift_linear(christoffel_lift_linear(christoffel_lift_linear(leg, {1, 2}, 43), {1, 2}, 42), {1, 2}, 41);
  auto rw = recurrence_for_weight(cube, 41);
  CHECK(max_coeff_diff(rw, three, 41) < 1e-14);
  CHECK(rw.mass == doctest::Approx(three.mass).epsilon(1e-14));

  WeightSpec bic(0, 0, {{Polynomial({3.0 / 9, 4.0 / 9, 2.0 / 9}), 2.5}});
  auto rb = recurrence_for_weight(bic, 41);
  CHECK(oracle::gram_error(rb, 40) < 1e-10);
  CHECK(rb.mass == doctest::Approx(oracle::integrate([&](double z) { return bic(z); })).epsilon(1e-12));

  auto plain = recurrence_for_weight(WeightSpec(0.5, 1.5), 10);
  CHECK(max_coeff_diff(plain, classical_jacobi_recurrence(0.5, 1.5, 10), 10) == 0.0);

  CHECK(kind_of([] { recurrence_for_weight(WeightSpec(0, 0, {{Polynomial({0.25, 0, -1.0}), 1.0}}), 5); }) ==
        ErrorKind::invalid_weight);
  CHECK(kind_of([] { recurrence_for_weight(WeightSpec(0, 0, {{lin(1, 0), 1.0}}), 5); }) == ErrorKind::invalid_weight);
}

TEST_CASE("evaluate and derivative") {
  auto leg = classical_jacobi_recurrence(0, 0, 30);
  Eigen::VectorXd pts(3);
  pts << -0.7, 0.0, 0.5;
  auto p = evaluate(leg, pts, 2);
  for (int j = 0; j < 3; ++j) CHECK(p(0, j) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p(1, 2) == doctest::Approx(std::sqrt(1.5) * 0.5).epsilon(1e-15));
  CHECK(std::abs(p(1, 2) - 0.61237) < 1e-5);

  auto d = evaluate_derivative(leg, pts, 2);
  CHECK(d.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(d(2, 1)) < 1e-15);

  auto r = recurrence_for_weight(WeightSpec(0.5, 1, {{lin(1, 2), 1.5}}), 25);
  Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(9, -0.9, 0.9);
  const double h = 1e-6;
  auto dd = evaluate_derivative(r, z, 20);
  auto fp = evaluate(r, (z.array() + h).matrix(), 20), fm = evaluate(r, (z.array() - h).matrix(), 20);
  CHECK(((fp - fm) / (2 * h) - dd).cwiseAbs().maxCoeff() < 1e-7);

  // Gram matrix at N = 30.
  auto q = gauss_quadrature(leg, 30);
  auto pq = evaluate(leg, q.nodes, 29);
  CHECK((pq * q.weights.asDiagonal() * pq.transpose() - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-12);

  // OpenMP kernel against its serial reference.
  Eigen::VectorXd many = Eigen::VectorXd::LinSpaced(500, -1, 1);
  CHECK((evaluate(r, many, 24, gyro::Exec::parallel) - evaluate(r, many, 24, gyro::Exec::serial)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Gauss quadrature") {
  auto q2 = gauss_quadrature(classical_jacobi_recurrence(0, 0, 2), 2);
  CHECK(q2.nodes(0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q2.nodes(1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q2.weights(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q2.weights(1) == doctest::Approx(1.0).epsilon(1e-15));

  WeightSpec w(0, 0, {{lin(1, 2), 1.0}});
  const int n = 12;
  auto q = gauss_quadrature(recurrence_for_weight(w, n), n);
  CHECK(q.weights.sum() == doctest::Approx(4.0).epsilon(1e-13));
  for (int k = 0; k <= 2 * n - 1; ++k) {
    // Analytic: int (2+t) t^k = 2 * [k even] 2/(k+1) + [k odd] 2/(k+2).
    const double exact = (k % 2 == 0) ? 4.0 / (k + 1) : 2.0 / (k + 2);
    const double got = (q.weights.array() * q.nodes.array().pow(k)).sum();
    CHECK(std::abs(got - exact) <= 1e-12 * std::abs(exact));
  }
  for (int j = 0; j + 1 < n; ++j) CHECK(q.nodes(j) < q.nodes(j + 1));
  auto qc = gauss_quadrature(recurrence_for_weight(w, n), n, NewtonPolish::converge);
  CHECK((qc.nodes - q.nodes).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(kind_of([] { gauss_quadrature(classical_jacobi_recurrence(0, 0, 3), 4); }) == ErrorKind::truncation);
}

TEST_CASE("embedding operators") {
  WeightSpec w(0.5, 1.0, {{lin(1, 2), 1.0}, {Polynomial({4, 0, 1}), 0.5}});
  const int n = 12;
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (WhichParam which : {WhichParam::jacobi_a(), WhichParam::jacobi_b(), WhichParam::augmenting(0), WhichParam::augmenting(1)}) {
    const BandedMatrix up = embedding(w, which, false, n + 3, n);
    const int deg = which.kind == WhichParam::factor ? w.factors[which.index].poly.degree() : 1;
    CHECK(up.bandwidth() == deg + 1);
    auto mb = up.measured_band();
    CHECK(mb.first <= up.lower());
    CHECK(mb.second <= up.upper());
    const WeightSpec raised = *up.codomain;
    const BandedMatrix down = embedding(raised, which, true, n, n + 3);
    CHECK(down.bandwidth() == deg + 1);
    auto rl = recurrence_for_weight(w, n + 8), rr = recurrence_for_weight(raised, n + 8);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd f(n), g(n + 3);
      for (auto& x : f) x = nd(rng);
      for (auto& x : g) x = nd(rng);
      const double lhs = inner(rr, up.to_dense() * f, g, n + 6);
      const double rhs = inner(rl, f, down.to_dense() * g, n + 6);
      CHECK(std::abs(lhs - rhs) < 1e-11 * (1 + std::abs(lhs)));
    }
    // Matrix adjointness directly, since both spaces are orthonormal.
    CHECK((up.to_dense().transpose() - down.to_dense()).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Identity map on P_0: values agree at shared nodes.
  const BandedMatrix ia = embedding(w, WhichParam::jacobi_a(), false, 3, 1);
  auto rl = recurrence_for_weight(w, 4), rr = recurrence_for_weight(*ia.codomain, 4);
  Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(5, -0.8, 0.8);
  Eigen::VectorXd lhs = evaluate(rr, pts, 2).transpose() * ia.to_dense().col(0);
  Eigen::VectorXd rhs = evaluate(rl, pts, 0).row(0).transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);

  // Commutation of I_a and I_b.
  auto ab = embedding(*embedding(w, WhichParam::jacobi_b(), false, n + 1, n).codomain, WhichParam::jacobi_a(), false, n + 2, n + 1) *
            embedding(w, WhichParam::jacobi_b(), false, n + 1, n);
  auto ba = embedding(*embedding(w, WhichParam::jacobi_a(), false, n + 1, n).codomain, WhichParam::jacobi_b(), false, n + 2, n + 1) *
            embedding(w, WhichParam::jacobi_a(), false, n + 1, n);
  CHECK((ab.to_dense() - ba.to_dense()).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(kind_of([] { embedding(WeightSpec(-0.5, 0), WhichParam::jacobi_a(), true, 3, 3); }) == ErrorKind::domain_mismatch);
}

TEST_CASE("differential operators") {
  const BandedMatrix d = differential(WeightSpec(0, 0), 1, 1, {}, 3, 3);
  CHECK(d(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(d.to_dense().col(0).cwiseAbs().maxCoeff() == 0.0);

  WeightSpec one(0, 0, {{lin(1, 2), 1.0}});
  CHECK(differential(one, 1, 1, {-1}, 10, 10).bandwidth() == 2);
  CHECK(differential(one, 1, 1, {1}, 10, 10).bandwidth() == 2);

  // Classical reductions against the closed-form Jacobi derivative: d/dz P_n^(a,b) raises both parameters.
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 1.5}, {-0.5, 2.0}}) {
    const int n = 12;
    auto dm = differential(WeightSpec(a, b), 1, 1, {}, n, n).to_dense();
    auto rs = classical_jacobi_recurrence(a, b, n + 1), rt = classical_jacobi_recurrence(a + 1, b + 1, n + 1);
    // Orthonormal derivative constant: P_n' = sqrt(n (n + a + b + 1)) Q_{n-1}.
    for (int k = 1; k < n; ++k) CHECK(dm(k - 1, k) == doctest::Approx(std::sqrt(k * (k + a + b + 1.0))).epsilon(1e-12));
    // Adjoint pair: D(-1,-1) from the raised space is minus the transpose.
    auto dt = differential(WeightSpec(a + 1, b + 1), -1, -1, {}, n, n).to_dense();
    CHECK((dt + dm.transpose()).cwiseAbs().maxCoeff() < 1e-11);
    auto dpm = differential(WeightSpec(a, b + 1), 1, -1, {}, n, n).to_dense();
    auto dmp = differential(WeightSpec(a + 1, b), -1, 1, {}, n, n).to_dense();
    CHECK((dpm + dmp.transpose()).cwiseAbs().maxCoeff() < 1e-11);
    (void)rs;
    (void)rt;
  }

  // Generalized adjointness and bandwidths with factors.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(0.1, 1.4);
  for (int trial = 0; trial < 5; ++trial) {
    WeightSpec w(ud(rng), ud(rng), {{lin(1, 1.5 + ud(rng)), 1.0 + std::floor(2 * ud(rng))}, {Polynomial({3 + ud(rng), 0.5, 1}), 1.0}});
    const int n = 10;
    for (int da : {1, -1})
      for (int db : {1, -1})
        for (int dc0 : {1, -1})
          for (int dc1 : {1, -1}) {
            std::vector<int> dc{dc0, dc1};
            auto fwd = differential(w, da, db, dc, n, n);
            int sum_deg = 1 + 2;
            CHECK(fwd.bandwidth() == 1 + sum_deg);
            auto mb = fwd.measured_band();
            CHECK(mb.first <= fwd.lower());
            CHECK(mb.second <= fwd.upper());
            WeightSpec tgt = w;
            tgt.a += da;
            tgt.b += db;
            tgt.factors[0].exponent += dc0;
            tgt.factors[1].exponent += dc1;
            auto back = differential(tgt, -da, -db, {-dc0, -dc1}, n, n);
            CHECK((fwd.to_dense() + back.to_dense().transpose()).cwiseAbs().maxCoeff() < 1e-11 * (1 + fwd.max_abs()));
          }
    // operator_entries with the derivative action equals differential(+1,+1,+1...).
    auto rd = recurrence_for_weight(w, 12);
    auto rc = recurrence_for_weight(w.shifted(1, 1, {1, 1}), 20);
    auto ent = operator_entries(FirstOrderAction::derivative(), rd, rc, 10, 10);
    CHECK((ent.to_dense() - differential(w, 1, 1, {1, 1}, 10, 10).to_dense()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("operator entries") {
  auto leg = classical_jacobi_recurrence(0, 0, 20);
  auto id = operator_entries(FirstOrderAction::identity(), leg, leg, 8, 8);
  CHECK((id.to_dense() - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
  auto zm = operator_entries(FirstOrderAction::multiply(lin(1, 0)), leg, leg, 8, 8);
  for (int k = 0; k + 1 < 8; ++k) {
    CHECK(zm(k + 1, k) == doctest::Approx(leg.beta[k]).epsilon(1e-14));
    CHECK(zm(k, k + 1) == doctest::Approx(leg.beta[k]).epsilon(1e-14));
  }
  CHECK(zm.bandwidth() == 3);
}

TEST_CASE("serialization round trip") {
  auto r = recurrence_for_weight(WeightSpec(0.5, -0.25, {{lin(1, 2), 1.5}}), 6);
  auto back = recurrence_from_json(to_json(r));
  CHECK(back.alpha == r.alpha);
  CHECK(back.beta == r.beta);
  CHECK(back.mass == r.mass);
  CHECK(to_json(r)["alpha"][0].is_string());
}
