#include "proxacc/regularizers.hpp"

#include <cmath>

#include "proxacc/svd_diff.hpp"

namespace proxacc {

// ---------------------------------------------------------------- L1Norm

double L1Norm::value(const Point& x) const { return x.cwiseAbs().sum(); }

ProxResult L1Norm::prox(const Point& y, double gamma_lambda) const {
  require(gamma_lambda > 0.0, "prox_l1: gamma_lambda must be positive");
  require(y.cols() == 1, "prox_l1: expects a vector");
  const int n = static_cast<int>(y.rows());
  ProxResult out;
  out.point = Point::Zero(n, 1);
  std::vector<int> I;
  for (int i = 0; i < n; ++i) {
    const double v = y(i, 0);
    if (v > gamma_lambda) {
      out.point(i, 0) = v - gamma_lambda;
    } else if (v < -gamma_lambda) {
      out.point(i, 0) = v + gamma_lambda;
    } else {
      I.push_back(i);
    }
  }
  out.manifold = ManifoldDescriptor::fixed_support(std::move(I), n);
  out.value_g = value(out.point);
  return out;
}

Point L1Norm::rgrad(const ManifoldDescriptor& m, const Point& x,
                    const SvdTriple*) const {
  check_on_manifold(m, x);
  Point g = x.unaryExpr([](double v) {
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  });
  for (int i : m.zero_set) g(i, 0) = 0.0;
  return g;
}

Point L1Norm::rhess(const ManifoldDescriptor& m, const Point&,
                    const Point& eta, const SvdTriple*) const {
  return Point::Zero(eta.rows(), eta.cols());
}

double L1Norm::qualification_margin(const ManifoldDescriptor& m, const Point&,
                                    const Point& grad_f,
                                    double lambda) const {
  double worst = 0.0;
  for (int i : m.zero_set) worst = std::max(worst, std::abs(grad_f(i, 0)));
  return lambda - worst;
}

// ------------------------------------------------------------ NuclearNorm

double NuclearNorm::value(const Point& x) const {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues().sum();
}

ProxResult NuclearNorm::prox(const Point& y, double gamma_lambda) const {
  require(gamma_lambda > 0.0, "prox_nuclear: gamma_lambda must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > gamma_lambda) ++r;

  ProxResult out;
  out.manifold = ManifoldDescriptor::fixed_rank(r, static_cast<int>(y.rows()),
                                                static_cast<int>(y.cols()));
  if (r == 0) {
    out.point = Point::Zero(y.rows(), y.cols());
    out.value_g = 0.0;
    SvdTriple t;
    t.U.resize(y.rows(), 0);
    t.sigma.resize(0);
    t.V.resize(y.cols(), 0);
    out.svd = std::move(t);
    return out;
  }
  SvdTriple t;
  t.U = svd.matrixU().leftCols(r);
  t.sigma = s.head(r).array() - gamma_lambda;
  t.V = svd.matrixV().leftCols(r);
  for (int j = 0; j < r; ++j) {
    int imax;
    t.U.col(j).cwiseAbs().maxCoeff(&imax);
    if (t.U(imax, j) < 0) {
      t.U.col(j) = -t.U.col(j);
      t.V.col(j) = -t.V.col(j);
    }
  }
  out.point = t.reconstruct();
  out.value_g = t.sigma.sum();
  out.svd = std::move(t);
  return out;
}

Point NuclearNorm::rgrad(const ManifoldDescriptor& m, const Point& x,
                         const SvdTriple* svd) const {
  if (m.rank == 0) return Point::Zero(m.rows, m.cols);
  if (svd) return svd->U * svd->V.transpose();
  const SvdTriple t = thin_svd(x, m.rank);
  return t.U * t.V.transpose();
}

Point NuclearNorm::rhess(const ManifoldDescriptor& m, const Point& x,
                         const Point& eta, const SvdTriple* svd) const {
  if (m.rank == 0) return Point::Zero(m.rows, m.cols);
  SvdTriple local;
  if (!svd) {
    local = thin_svd(x, m.rank);
    svd = &local;
  }
  if (svd->sigma.minCoeff() <= 1e-12)
    throw IllConditionedCurvature("nuclear rhess: tiny singular value");
  const FixedRankTangent t = factor_tangent(*svd, eta);
  const Eigen::MatrixXd Ft = coupling_Ftilde(svd->sigma);
  const Eigen::VectorXd sinv = svd->sigma.cwiseInverse();
  return svd->U * (Ft.cwiseProduct(t.M - t.M.transpose())) *
             svd->V.transpose() +
         t.Up * sinv.asDiagonal() * svd->V.transpose() +
         svd->U * sinv.asDiagonal() * t.Vp.transpose();
}

double NuclearNorm::qualification_margin(const ManifoldDescriptor& m,
                                         const Point& x, const Point& grad_f,
                                         double lambda) const {
  SvdTriple t;
  if (m.rank > 0) t = thin_svd(x, m.rank);
  Point off = grad_f;
  if (m.rank > 0) {
    off -= t.U * (t.U.transpose() * off);
    off -= (off * t.V) * t.V.transpose();
  }
  const double smax =
      off.size() == 0
          ? 0.0
          : Eigen::JacobiSVD<Eigen::MatrixXd>(off).singularValues()(0);
  return lambda - smax;
}

// ------------------------------------------------------------ AbsParabola

double AbsParabola::value(const Point& x) const {
  return std::abs(x(0, 0) * x(0, 0) - x(1, 0));
}

namespace {

// Residual of the middle-case stationarity cubic in t.
double parabola_prox_cubic(double t, double y1, double y2, double gamma) {
  const double d = 1.0 + 4.0 * gamma * t - 2.0 * gamma;
  return y1 * y1 - (y2 + 2.0 * gamma * t - gamma) * d * d;
}

double parabola_prox_objective(const Eigen::Vector2d& u,
                               const Eigen::Vector2d& y, double gamma) {
  return std::abs(u(0) * u(0) - u(1)) + (u - y).squaredNorm() / (2.0 * gamma);
}

}  // namespace

ProxResult AbsParabola::prox(const Point& y, double gamma_lambda) const {
  require(y.rows() == 2 && y.cols() == 1, "prox_abs_parabola: expects R^2");
  require(gamma_lambda > 0.0 && gamma_lambda < 0.5,
          "prox_abs_parabola: gamma must lie in (0, 1/2)");
  const double g = gamma_lambda;
  const double y1 = y(0, 0), y2 = y(1, 0);
  const double lo = y1 * y1 / ((1.0 + 2.0 * g) * (1.0 + 2.0 * g)) - g;
  const double hi = y1 * y1 / ((1.0 - 2.0 * g) * (1.0 - 2.0 * g)) + g;

  ProxResult out;
  out.point.resize(2, 1);
  if (y2 <= lo) {
    out.point << y1 / (1.0 + 2.0 * g), y2 + g;
    out.manifold = ManifoldDescriptor::full(2, 1);
  } else if (y2 >= hi) {
    out.point << y1 / (1.0 - 2.0 * g), y2 - g;
    out.manifold = ManifoldDescriptor::full(2, 1);
  } else {
    // Middle case: output sits on the parabola. Bracket-scan the cubic on
    // t in [0,1], refine by bisection, polish by Newton; among admissible
    // roots keep the one with the smallest prox objective.
    constexpr int kScan = 64;
    double best_obj = std::numeric_limits<double>::infinity();
    double best_t = std::numeric_limits<double>::quiet_NaN();
    double prev_t = 0.0;
    double prev_h = parabola_prox_cubic(prev_t, y1, y2, g);
    for (int k = 1; k <= kScan; ++k) {
      const double t = static_cast<double>(k) / kScan;
      const double h = parabola_prox_cubic(t, y1, y2, g);
      if (prev_h == 0.0 || prev_h * h <= 0.0) {
        double a = prev_t, b = t, ha = prev_h;
        for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
          const double mid = 0.5 * (a + b);
          const double hm = parabola_prox_cubic(mid, y1, y2, g);
          if (ha * hm <= 0.0) {
            b = mid;
          } else {
            a = mid;
            ha = hm;
          }
        }
        double t_root = 0.5 * (a + b);
        for (int it = 0; it < 10; ++it) {
          const double h0 = parabola_prox_cubic(t_root, y1, y2, g);
          const double eps = 1e-9;
          const double dh = (parabola_prox_cubic(t_root + eps, y1, y2, g) -
                             parabola_prox_cubic(t_root - eps, y1, y2, g)) /
                            (2.0 * eps);
          if (std::abs(dh) < 1e-300) break;
          t_root -= h0 / dh;
        }
        const double denom = 1.0 + 4.0 * g * t_root - 2.0 * g;
        if (denom > 0.0) {
          Eigen::Vector2d cand;
          cand(0) = y1 / denom;
          cand(1) = cand(0) * cand(0);
          const double obj = parabola_prox_objective(
              cand, Eigen::Vector2d(y1, y2), g);
          if (obj < best_obj) {
            best_obj = obj;
            best_t = t_root;
          }
        }
      }
      prev_t = t;
      prev_h = h;
    }
    if (!std::isfinite(best_t))
      throw NumericalFailure("prox_abs_parabola: no admissible cubic root");
    if (std::abs(parabola_prox_cubic(best_t, y1, y2, g)) >
        1e-13 * std::max(1.0, y1 * y1 + std::abs(y2)))
      throw NumericalFailure("prox_abs_parabola: cubic residual too large");
    const double x1 = y1 / (1.0 + 4.0 * g * best_t - 2.0 * g);
    out.point << x1, x1 * x1;
    out.manifold = ManifoldDescriptor::parabola();
  }
  out.value_g = value(out.point);
  return out;
}

Point AbsParabola::rgrad(const ManifoldDescriptor& m, const Point& x,
                         const SvdTriple*) const {
  if (m.kind == ManifoldDescriptor::Kind::Parabola)
    return Point::Zero(2, 1);
  // Smooth branch away from the kink.
  const double s = x(0, 0) * x(0, 0) - x(1, 0) > 0.0 ? 1.0 : -1.0;
  Point g(2, 1);
  g << s * 2.0 * x(0, 0), -s;
  return g;
}

Point AbsParabola::rhess(const ManifoldDescriptor& m, const Point& x,
                         const Point& eta, const SvdTriple*) const {
  if (m.kind == ManifoldDescriptor::Kind::Parabola)
    return Point::Zero(2, 1);
  const double s = x(0, 0) * x(0, 0) - x(1, 0) > 0.0 ? 1.0 : -1.0;
  Point h(2, 1);
  h << s * 2.0 * eta(0, 0), 0.0;
  return h;
}

double AbsParabola::qualification_margin(const ManifoldDescriptor& m,
                                         const Point& x, const Point& grad_f,
                                         double lambda) const {
  if (m.kind != ManifoldDescriptor::Kind::Parabola) return 0.0;
  // Subdifferential at x on the parabola spans s * (2 x1, -1), s in
  // lambda * [-1, 1]; the margin is the distance of the needed normal
  // component to the segment endpoints.
  const Eigen::Vector2d n(2.0 * x(0, 0), -1.0);
  const double c = -(grad_f(0, 0) * n(0) + grad_f(1, 0) * n(1)) / n.norm();
  return lambda * n.norm() - std::abs(c);
}

// -------------------------------------------------------------- diagnostics

QualificationReport qualification_report(const CompositeProblem& problem,
                                         const Point& x,
                                         const ManifoldDescriptor& manifold,
                                         double gamma, OracleCounters& c) {
  const Point gf = problem.grad_f(x, c);
  const ProxResult pr = problem.prox_g(x - gamma * gf, gamma, c);
  QualificationReport rep;
  rep.fixed_point_residual = (x - pr.point).norm();
  rep.margin = problem.nonsmooth->qualification_margin(manifold, x, gf,
                                                       problem.lambda);
  rep.manifold = manifold;
  return rep;
}

}  // namespace proxacc
