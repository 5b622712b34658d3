#include <doctest.h>

#include "proxacc/driver.hpp"
#include "proxacc/regularizers.hpp"
#include "proxacc/smooth.hpp"
#include "test_util.hpp"

using namespace proxacc;
using namespace proxacc::testutil;

namespace {

Point vec(std::initializer_list<double> vals) {
  Point v(static_cast<int>(vals.size()), 1);
  int i = 0;
  for (double x : vals) v(i++, 0) = x;
  return v;
}

/// 1-D grid + Newton polish minimizer of gl*|u| + (u - y)^2 / 2.
double soft_threshold_oracle(double y, double gl) {
  double best_u = 0.0, best = gl * 0.0 + 0.5 * y * y;
  const double lim = std::abs(y) + 1.0;
  for (int i = -4000; i <= 4000; ++i) {
    const double u = lim * i / 4000.0;
    const double v = gl * std::abs(u) + 0.5 * (u - y) * (u - y);
    if (v < best) {
      best = v;
      best_u = u;
    }
  }
  if (best_u != 0.0) {
    // stationarity: u = y - gl*sign(u)
    best_u = y - gl * (best_u > 0 ? 1.0 : -1.0);
  }
  return best_u;
}

/// 2-D grid + Newton polish minimizer of |u1^2 - u2| + ||u - y||^2 / (2 g).
Eigen::Vector2d abs_parabola_oracle(const Eigen::Vector2d& y, double g) {
  auto obj = [&](double u1, double u2) {
    const double d1 = u1 - y(0), d2 = u2 - y(1);
    return std::abs(u1 * u1 - u2) + (d1 * d1 + d2 * d2) / (2.0 * g);
  };
  const double lim = y.cwiseAbs().maxCoeff() + 1.0;
  double b1 = 0, b2 = 0, best = obj(0, 0);
  const int N = 700;
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j) {
      const double u1 = lim * i / N, u2 = lim * j / N;
      const double v = obj(u1, u2);
      if (v < best) {
        best = v;
        b1 = u1;
        b2 = u2;
      }
    }
  // local polish: either the smooth branch u2 != u1^2 (closed form) or the
  // manifold branch u2 = u1^2 (1-D Newton on the reduced objective)
  if (std::abs(b2 - b1 * b1) > 2.0 * lim / N) {
    const double s = (b1 * b1 - b2 > 0) ? 1.0 : -1.0;
    // grad: s*(2u1, -1) + (u - y)/g = 0
    double u1 = y(0) / (1.0 + 2.0 * s * g);
    double u2 = y(1) + s * g;
    if (obj(u1, u2) <= best + 1e-12) {
      b1 = u1;
      b2 = u2;
    }
  } else {
    double u = b1;
    for (int it = 0; it < 60; ++it) {
      // psi(u) = (u - y1)^2/(2g) + (u^2 - y2)^2/(2g)
      const double d1 = (u - y(0)) + 2.0 * u * (u * u - y(1));
      const double d2 = 1.0 + 6.0 * u * u - 2.0 * y(1);
      if (std::abs(d2) < 1e-14) break;
      const double step = d1 / d2;
      u -= step;
      if (std::abs(step) < 1e-15) break;
    }
    if (obj(u, u * u) <= best + 1e-12) {
      b1 = u;
      b2 = u * u;
    }
  }
  return {b1, b2};
}

}  // namespace

TEST_CASE("l1 prox: case arithmetic") {
  L1Norm g;
  const ProxResult r = g.prox(vec({2, -0.5, 0.3}), 1.0);
  CHECK(r.point(0, 0) == 1.0);
  CHECK(r.point(1, 0) == 0.0);
  CHECK(r.point(2, 0) == 0.0);
  REQUIRE(r.manifold.kind == ManifoldDescriptor::Kind::FixedSupport);
  CHECK(r.manifold.zero_set == std::vector<int>{1, 2});
  CHECK(r.value_g == 1.0);
}

TEST_CASE("l1 prox at zero") {
  L1Norm g;
  const ProxResult r = g.prox(Point::Zero(4, 1), 0.5);
  CHECK(r.point.norm() == 0.0);
  CHECK(r.manifold.zero_set == std::vector<int>{0, 1, 2, 3});
  CHECK(r.manifold.dim() == 0);
}

TEST_CASE("l1 prox against the 1-D brute-force oracle") {
  L1Norm g;
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Point y(5, 1);
    for (int i = 0; i < 5; ++i) y(i, 0) = unif(rng);
    const ProxResult r = g.prox(y, 0.3);
    for (int i = 0; i < 5; ++i)
      CHECK(r.point(i, 0) ==
            doctest::Approx(soft_threshold_oracle(y(i, 0), 0.3))
                .epsilon(1e-10));
  }
}

TEST_CASE("nuclear prox: diagonal case and zero") {
  NuclearNorm g;
  Point y = Point::Zero(3, 3);
  y(0, 0) = 3.0;
  y(1, 1) = 1.0;
  y(2, 2) = 0.2;
  const ProxResult r = g.prox(y, 0.5);
  REQUIRE(r.manifold.kind == ManifoldDescriptor::Kind::FixedRank);
  CHECK(r.manifold.rank == 2);
  Point want = Point::Zero(3, 3);
  want(0, 0) = 2.5;
  want(1, 1) = 0.5;
  CHECK((r.point - want).norm() <= 1e-12);
  CHECK(r.svd.has_value());
  CHECK(r.svd->rank() == 2);

  const ProxResult z = g.prox(Point::Zero(3, 3), 0.5);
  CHECK(z.point.norm() == 0.0);
  CHECK(z.manifold.dim() == 0);
}

TEST_CASE("nuclear prox: optimality probes") {
  NuclearNorm g;
  std::mt19937_64 rng(223);
  const double gl = 0.8;
  const Point y = random_matrix(6, 7, rng);
  const ProxResult r = g.prox(y, gl);
  auto obj = [&](const Point& u) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u);
    return gl * svd.singularValues().sum() + 0.5 * (u - y).squaredNorm();
  };
  const double at_prox = obj(r.point);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const Point pert = r.point + 0.1 * random_matrix(6, 7, rng);
    CHECK(at_prox <= obj(pert) + 1e-12);
  }
  // recomputed full-SVD threshold
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = (svd.singularValues().array() - gl).max(0.0);
  const Point ref = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  CHECK((r.point - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
}

TEST_CASE("prox optimality inclusion (subdifferential bounds)") {
  std::mt19937_64 rng(227);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const double gl = 0.4;

  L1Norm l1;
  for (int trial = 0; trial < 50; ++trial) {
    Point y(6, 1);
    for (int i = 0; i < 6; ++i) y(i, 0) = unif(rng);
    const ProxResult r = l1.prox(y, gl);
    for (int i = 0; i < 6; ++i) {
      const double sub = (y(i, 0) - r.point(i, 0)) / gl;
      CHECK(std::abs(sub) <= 1.0 + 1e-12);
      if (r.point(i, 0) != 0.0)
        CHECK(sub == doctest::Approx(r.point(i, 0) > 0 ? 1.0 : -1.0));
    }
  }

  NuclearNorm nuc;
  for (int trial = 0; trial < 20; ++trial) {
    const Point y = random_matrix(5, 6, rng);
    const ProxResult r = nuc.prox(y, gl);
    if (r.manifold.rank == 0) continue;
    const Eigen::MatrixXd U = r.svd->U, V = r.svd->V;
    const Point resid = (y - r.point) / gl;
    const Point offspace =
        (Eigen::MatrixXd::Identity(5, 5) - U * U.transpose()) * resid *
        (Eigen::MatrixXd::Identity(6, 6) - V * V.transpose());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(offspace);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-10);
  }
}

TEST_CASE("prox nonexpansiveness for the convex regularizers") {
  std::mt19937_64 rng(229);
  L1Norm l1;
  NuclearNorm nuc;
  for (int trial = 0; trial < 100; ++trial) {
    const Point a = random_matrix(6, 1, rng), b = random_matrix(6, 1, rng);
    CHECK((l1.prox(a, 0.7).point - l1.prox(b, 0.7).point).norm() <=
          (a - b).norm() + 1e-14);
    const Point ya = random_matrix(4, 5, rng), yb = random_matrix(4, 5, rng);
    CHECK((nuc.prox(ya, 0.7).point - nuc.prox(yb, 0.7).point).norm() <=
          (ya - yb).norm() + 1e-13);
  }
}

TEST_CASE("abs-parabola prox: origin and case boundaries") {
  AbsParabola g;
  SUBCASE("origin is fixed and identified") {
    const ProxResult r = g.prox(vec({0, 0}), 0.1);
    CHECK(r.point.norm() <= 1e-13);
    CHECK(r.manifold.kind == ManifoldDescriptor::Kind::Parabola);
  }
  SUBCASE("third case: smooth branch above the parabola") {
    const ProxResult r = g.prox(vec({0, 1}), 0.1);
    CHECK(r.point(0, 0) == doctest::Approx(0.0));
    CHECK(r.point(1, 0) == doctest::Approx(0.9));
    CHECK(r.manifold.kind != ManifoldDescriptor::Kind::Parabola);
  }
  SUBCASE("gamma out of range is rejected") {
    CHECK_THROWS_AS(g.prox(vec({0, 0}), 0.6), ContractViolation);
  }
}

TEST_CASE("abs-parabola prox against the 2-D grid oracle") {
  AbsParabola g;
  std::mt19937_64 rng(233);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  const double gamma = 0.05;
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Vector2d y(unif(rng), unif(rng));
    const ProxResult r = g.prox(Point(y), gamma);
    const Eigen::Vector2d ref = abs_parabola_oracle(y, gamma);
    CHECK((Eigen::Vector2d(r.point) - ref).norm() <= 1e-6);
    // middle-case consistency
    if (r.manifold.kind == ManifoldDescriptor::Kind::Parabola)
      CHECK(std::abs(r.point(1, 0) - r.point(0, 0) * r.point(0, 0)) <= 1e-12);
  }
}

TEST_CASE("structure exactness of prox outputs") {
  std::mt19937_64 rng(239);
  L1Norm l1;
  for (int trial = 0; trial < 20; ++trial) {
    const ProxResult r = l1.prox(random_matrix(8, 1, rng), 0.5);
    for (int i : r.manifold.zero_set) CHECK(r.point(i, 0) == 0.0);
  }
  NuclearNorm nuc;
  for (int trial = 0; trial < 20; ++trial) {
    const ProxResult r = nuc.prox(random_matrix(5, 6, rng), 0.5);
    if (r.manifold.rank > 0)
      CHECK((r.svd->reconstruct() - r.point).norm() == 0.0);
  }
}

TEST_CASE("l1 riemannian derivatives on a fixed support") {
  L1Norm g;
  const auto m = ManifoldDescriptor::fixed_support({1}, 3);
  const Point x = vec({1, 0, -2});
  const Point rg = g.rgrad(m, x, nullptr);
  CHECK(rg(0, 0) == 1.0);
  CHECK(rg(1, 0) == 0.0);
  CHECK(rg(2, 0) == -1.0);
  const Point rh = g.rhess(m, x, vec({0.3, 0, 0.7}), nullptr);
  CHECK(rh.norm() == 0.0);
}

TEST_CASE("nuclear riemannian gradient on a diagonal point") {
  NuclearNorm g;
  const auto m = ManifoldDescriptor::fixed_rank(2, 3, 3);
  Point x = Point::Zero(3, 3);
  x(0, 0) = 2.0;
  x(1, 1) = 1.0;
  const Point rg = g.rgrad(m, x, nullptr);
  Point want = Point::Zero(3, 3);
  want(0, 0) = 1.0;
  want(1, 1) = 1.0;
  CHECK((rg - want).norm() <= 1e-13);
}

TEST_CASE("nuclear rhess matches finite differences") {
  NuclearNorm g;
  std::mt19937_64 rng(241);
  const auto m = ManifoldDescriptor::fixed_rank(3, 8, 9);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = random_fixed_rank_point(8, 9, 3, rng);
    Point eta = project_tangent(m, x, random_matrix(8, 9, rng));
    eta /= eta.norm();
    const Point rh = g.rhess(m, x, eta, nullptr);
    const double fd = fd_second_derivative([&](double t) {
      const Point y = retract(m, x, t * eta);
      return thin_svd(y, 3).sigma.sum();
    });
    CHECK(frob_inner(rh, eta) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("l1 taylor slope on the fixed-support manifold") {
  L1Norm g;
  std::mt19937_64 rng(251);
  const auto m = ManifoldDescriptor::fixed_support({1, 4}, 6);
  Point x = random_matrix(6, 1, rng);
  for (int i : m.zero_set) x(i, 0) = 0.0;
  Point eta = project_tangent(m, x, random_matrix(6, 1, rng));
  eta /= 10.0 * eta.norm();  // keep signs stable along the segment
  const Point rg = g.rgrad(m, x, nullptr);
  const double g0 = g.value(x);
  auto rem = [&](double t) {
    return g.value(x + t * eta) - g0 - t * frob_inner(rg, eta);
  };
  const double slope = remainder_slope(rem, {1e-2, 1e-3, 1e-4});
  // the restriction is locally linear, so the remainder is pure roundoff;
  // only fit a slope if it rises above the noise floor
  if (std::isfinite(slope) && std::abs(rem(1e-2)) > 1e-12 * (1.0 + g0))
    CHECK(slope >= 1.9);
  CHECK(std::abs(rem(1e-2)) <= 1e-10 * (1.0 + g0));
}

TEST_CASE("qualification margins") {
  SUBCASE("l1 interior-most case gives margin lambda") {
    CompositeProblem p;
    const double lambda = 0.3;
    Point xbar = vec({1, 0, -2});
    // f = 1/2 ||x - a||^2 with a = xbar - lambda * sign-pattern target:
    // grad f(xbar) = -lambda*sign on support, 0 off support.
    Point a = xbar;
    a(0, 0) += lambda;
    a(2, 0) -= lambda;
    p.smooth = std::make_shared<QuadraticDistanceOracle>(a);
    p.nonsmooth = std::make_shared<L1Norm>();
    p.lambda = lambda;
    OracleCounters c;
    const auto m = ManifoldDescriptor::fixed_support({1}, 3);
    const QualificationReport q = qualification_report(p, xbar, m, 0.5, c);
    CHECK(q.margin == doctest::Approx(lambda));
    CHECK(q.fixed_point_residual <= 1e-12);
  }
  SUBCASE("off-support gradient at the boundary gives margin zero") {
    CompositeProblem p;
    const double lambda = 0.3;
    Point xbar = vec({1, 0});
    Point a = xbar;
    a(0, 0) += lambda;
    a(1, 0) = -lambda;  // grad f(xbar)_2 = lambda exactly
    p.smooth = std::make_shared<QuadraticDistanceOracle>(a);
    p.nonsmooth = std::make_shared<L1Norm>();
    p.lambda = lambda;
    OracleCounters c;
    const auto m = ManifoldDescriptor::fixed_support({1}, 2);
    const QualificationReport q = qualification_report(p, xbar, m, 0.5, c);
    CHECK(q.margin == doctest::Approx(0.0).epsilon(1e-12));
  }
}
