#include "proxacc/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace proxacc {

SvdTriple thin_svd(const Point& x, int r, double abs_tol) {
  require(r >= 0 && r <= std::min(x.rows(), x.cols()),
          "thin_svd: rank out of range");
  SvdTriple out;
  if (r == 0) {
    out.U.resize(x.rows(), 0);
    out.sigma.resize(0);
    out.V.resize(x.cols(), 0);
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  if (svd.singularValues()(r - 1) < abs_tol)
    throw RankCollapse("thin_svd: singular value " + std::to_string(r) +
                       " below tolerance");
  out.U = svd.matrixU().leftCols(r);
  out.sigma = svd.singularValues().head(r);
  out.V = svd.matrixV().leftCols(r);
  // Fix the sign ambiguity: largest-magnitude entry of each U column positive.
  for (int j = 0; j < r; ++j) {
    int imax;
    out.U.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.U(imax, j) < 0) {
      out.U.col(j) = -out.U.col(j);
      out.V.col(j) = -out.V.col(j);
    }
  }
  return out;
}

ManifoldDescriptor ManifoldDescriptor::fixed_support(std::vector<int> I,
                                                     int n) {
  std::sort(I.begin(), I.end());
  ManifoldDescriptor m;
  m.kind = Kind::FixedSupport;
  m.zero_set = std::move(I);
  m.rows = n;
  m.cols = 1;
  return m;
}

ManifoldDescriptor ManifoldDescriptor::fixed_rank(int r, int m_, int n) {
  require(r >= 0 && r <= std::min(m_, n), "fixed_rank: invalid rank");
  ManifoldDescriptor m;
  m.kind = Kind::FixedRank;
  m.rank = r;
  m.rows = m_;
  m.cols = n;
  return m;
}

ManifoldDescriptor ManifoldDescriptor::parabola() {
  ManifoldDescriptor m;
  m.kind = Kind::Parabola;
  m.rows = 2;
  m.cols = 1;
  return m;
}

ManifoldDescriptor ManifoldDescriptor::full(int rows, int cols) {
  ManifoldDescriptor m;
  m.kind = Kind::Full;
  m.rows = rows;
  m.cols = cols;
  return m;
}

int ManifoldDescriptor::dim() const {
  switch (kind) {
    case Kind::FixedSupport:
      return rows * cols - static_cast<int>(zero_set.size());
    case Kind::FixedRank:
      return rank * (rows + cols - rank);
    case Kind::Parabola:
      return 1;
    case Kind::Full:
      return rows * cols;
  }
  return 0;
}

bool ManifoldDescriptor::operator==(const ManifoldDescriptor& o) const {
  if (kind != o.kind || rows != o.rows || cols != o.cols) return false;
  switch (kind) {
    case Kind::FixedSupport:
      return zero_set == o.zero_set;
    case Kind::FixedRank:
      return rank == o.rank;
    default:
      return true;
  }
}

FixedRankTangent factor_tangent(const SvdTriple& x, const Point& eta) {
  FixedRankTangent t;
  const Eigen::MatrixXd etaV = eta * x.V;
  const Eigen::MatrixXd etaTU = eta.transpose() * x.U;
  t.M = x.U.transpose() * etaV;
  t.Up = etaV - x.U * t.M;
  t.Vp = etaTU - x.V * t.M.transpose();
  return t;
}

bool on_manifold(const ManifoldDescriptor& m, const Point& x, double tol) {
  if (x.rows() != m.rows || x.cols() != m.cols) return false;
  switch (m.kind) {
    case ManifoldDescriptor::Kind::FixedSupport:
      for (int i : m.zero_set)
        if (std::abs(x(i, 0)) > tol) return false;
      return true;
    case ManifoldDescriptor::Kind::FixedRank: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
      const auto& s = svd.singularValues();
      const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
      if (m.rank > 0 && s(m.rank - 1) <= tol * scale) return false;
      if (m.rank < s.size() && s(m.rank) > tol * scale) return false;
      return true;
    }
    case ManifoldDescriptor::Kind::Parabola:
      return std::abs(x(1, 0) - x(0, 0) * x(0, 0)) <= tol;
    case ManifoldDescriptor::Kind::Full:
      return true;
  }
  return false;
}

void check_on_manifold(const ManifoldDescriptor& m, const Point& x,
                       double tol) {
  require(on_manifold(m, x, tol), "point is off the manifold");
}

namespace {

Point mask_support(const ManifoldDescriptor& m, Point d) {
  for (int i : m.zero_set) d(i, 0) = 0.0;
  return d;
}

Eigen::Vector2d parabola_normal(const Point& x) {
  return Eigen::Vector2d(2.0 * x(0, 0), -1.0);
}

Point parabola_project(const Point& x, const Point& d) {
  const Eigen::Vector2d n = parabola_normal(x);
  const double c = (d(0, 0) * n(0) + d(1, 0) * n(1)) / n.squaredNorm();
  Point out = d;
  out(0, 0) -= c * n(0);
  out(1, 0) -= c * n(1);
  return out;
}

}  // namespace

Point project_tangent(const ManifoldDescriptor& m, const SvdTriple& x,
                      const Point& d) {
  const Eigen::MatrixXd UUtd = x.U * (x.U.transpose() * d);
  const Eigen::MatrixXd dVVt = (d * x.V) * x.V.transpose();
  return UUtd + dVVt - x.U * (x.U.transpose() * dVVt);
}

Point project_tangent(const ManifoldDescriptor& m, const Point& x,
                      const Point& d) {
  check_on_manifold(m, x);
  require(d.rows() == m.rows && d.cols() == m.cols,
          "project_tangent: shape mismatch");
  switch (m.kind) {
    case ManifoldDescriptor::Kind::FixedSupport:
      return mask_support(m, d);
    case ManifoldDescriptor::Kind::FixedRank: {
      if (m.rank == 0) return Point::Zero(m.rows, m.cols);
      return project_tangent(m, thin_svd(x, m.rank), d);
    }
    case ManifoldDescriptor::Kind::Parabola:
      return parabola_project(x, d);
    case ManifoldDescriptor::Kind::Full:
      return d;
  }
  return d;
}

Eigen::Vector2d project_to_parabola(const Eigen::Vector2d& p) {
  // Stationarity cubic c(u) = 2u^3 + (1 - 2 p2) u - p1 = 0.
  const double a = 1.0 - 2.0 * p(1);
  auto c = [&](double u) { return 2.0 * u * u * u + a * u - p(0); };
  auto dist2 = [&](double u) {
    const double du = u - p(0), dv = u * u - p(1);
    return du * du + dv * dv;
  };

  // Bracket each monotone piece of the cubic and solve by bisection
  // followed by Newton polish.
  std::vector<std::pair<double, double>> brackets;
  const double span =
      2.0 + std::abs(p(0)) + std::sqrt(std::max(0.0, std::abs(p(1))));
  if (a >= 0.0) {
    brackets.emplace_back(-span, span);
  } else {
    const double ucrit = std::sqrt(-a / 6.0);
    brackets.emplace_back(-span - ucrit, -ucrit);
    brackets.emplace_back(-ucrit, ucrit);
    brackets.emplace_back(ucrit, span + ucrit);
  }

  double best_u = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (auto [lo, hi] : brackets) {
    double flo = c(lo), fhi = c(hi);
    if (flo == 0.0) fhi = flo;  // degenerate, bisection handles it
    if (flo * fhi > 0.0) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = c(mid);
      if (flo * fm <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      const double f = c(u);
      const double df = 6.0 * u * u + a;
      if (std::abs(df) < 1e-300) break;
      const double step = f / df;
      u -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(u))) break;
    }
    if (dist2(u) < best_d) {
      best_d = dist2(u);
      best_u = u;
    }
  }
  return Eigen::Vector2d(best_u, best_u * best_u);
}

Point retract(const ManifoldDescriptor& m, const Point& x, const Point& eta) {
  check_on_manifold(m, x);
  switch (m.kind) {
    case ManifoldDescriptor::Kind::FixedSupport:
    case ManifoldDescriptor::Kind::Full:
      return x + eta;
    case ManifoldDescriptor::Kind::FixedRank: {
      if (m.rank == 0) return x;
      return thin_svd(x + eta, m.rank).reconstruct();
    }
    case ManifoldDescriptor::Kind::Parabola: {
      const Eigen::Vector2d p(x(0, 0) + eta(0, 0), x(1, 0) + eta(1, 0));
      const Eigen::Vector2d q = project_to_parabola(p);
      Point out(2, 1);
      out << q(0), q(1);
      return out;
    }
  }
  return x + eta;
}

double riemannian_distance(const ManifoldDescriptor& m, const Point& x,
                           const Point& y) {
  check_on_manifold(m, x);
  check_on_manifold(m, y);
  return (x - y).norm();
}

Point euclid_to_rgrad(const ManifoldDescriptor& m, const Point& x,
                      const Point& egrad) {
  return project_tangent(m, x, egrad);
}

Point euclid_to_rhessvec(const ManifoldDescriptor& m, const SvdTriple& x,
                         const Point& egrad, const Point& ehess_eta,
                         const Point& eta) {
  if (x.rank() > 0 && x.sigma.minCoeff() <= 1e-12)
    throw IllConditionedCurvature(
        "fixed-rank Hessian: singular value below tolerance");
  const FixedRankTangent t = factor_tangent(x, eta);
  const Eigen::VectorXd sinv = x.sigma.cwiseInverse();
  const Eigen::MatrixXd PUg = egrad - x.U * (x.U.transpose() * egrad);
  const Eigen::MatrixXd PVgt =
      egrad.transpose() - x.V * (x.V.transpose() * egrad.transpose());
  Point out = project_tangent(m, x, ehess_eta);
  out += (PUg * t.Vp * sinv.asDiagonal()) * x.V.transpose();
  out += x.U * (PVgt * t.Up * sinv.asDiagonal()).transpose();
  return out;
}

Point euclid_to_rhessvec(const ManifoldDescriptor& m, const Point& x,
                         const Point& egrad, const Point& ehess_eta,
                         const Point& eta) {
  switch (m.kind) {
    case ManifoldDescriptor::Kind::FixedSupport:
    case ManifoldDescriptor::Kind::Full:
      return project_tangent(m, x, ehess_eta);
    case ManifoldDescriptor::Kind::FixedRank: {
      if (m.rank == 0) return Point::Zero(m.rows, m.cols);
      return euclid_to_rhessvec(m, thin_svd(x, m.rank), egrad, ehess_eta, eta);
    }
    case ManifoldDescriptor::Kind::Parabola: {
      const Eigen::Vector2d n = parabola_normal(x);
      const double w =
          (egrad(0, 0) * n(0) + egrad(1, 0) * n(1)) / n.squaredNorm();
      Point corrected = ehess_eta;
      corrected(0, 0) -= 2.0 * eta(0, 0) * w;
      return parabola_project(x, corrected);
    }
  }
  return ehess_eta;
}

}  // namespace proxacc
