#pragma once

#include <vector>

#include "proxacc/common.hpp"

namespace proxacc {

/// Thin SVD (U, Sigma, V) of a rank-r matrix, column signs fixed so the
/// largest-magnitude entry of each column of U is positive, singular values
/// sorted nonincreasing and strictly positive.
struct SvdTriple {
  Eigen::MatrixXd U;      // m x r
  Eigen::VectorXd sigma;  // r, positive, nonincreasing
  Eigen::MatrixXd V;      // n x r

  int rank() const { return static_cast<int>(sigma.size()); }
  Point reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
};

/// Compute the sign-fixed thin SVD of x truncated to rank r.
/// Throws RankCollapse if the r-th singular value is below abs_tol.
SvdTriple thin_svd(const Point& x, int r, double abs_tol = 1e-12);

/// Runtime identity of the manifold identified by a prox evaluation.
struct ManifoldDescriptor {
  enum class Kind { FixedSupport, FixedRank, Parabola, Full };

  Kind kind = Kind::Full;
  std::vector<int> zero_set;  // FixedSupport: indices forced to zero, sorted
  int rank = 0;               // FixedRank
  int rows = 0, cols = 1;     // ambient shape

  static ManifoldDescriptor fixed_support(std::vector<int> I, int n);
  static ManifoldDescriptor fixed_rank(int r, int m, int n);
  static ManifoldDescriptor parabola();
  static ManifoldDescriptor full(int rows, int cols);

  int ambient_dim() const { return rows * cols; }
  int dim() const;
  bool operator==(const ManifoldDescriptor& o) const;
  bool operator!=(const ManifoldDescriptor& o) const { return !(*this == o); }
};

/// Factored representation of a fixed-rank tangent vector
/// eta = U M V^T + U_p V^T + U V_p^T with U^T U_p = 0, V^T V_p = 0.
struct FixedRankTangent {
  Eigen::MatrixXd M;   // r x r
  Eigen::MatrixXd Up;  // m x r
  Eigen::MatrixXd Vp;  // n x r

  Point ambient(const SvdTriple& x) const {
    return x.U * M * x.V.transpose() + Up * x.V.transpose() +
           x.U * Vp.transpose();
  }
};

FixedRankTangent factor_tangent(const SvdTriple& x, const Point& eta);

bool on_manifold(const ManifoldDescriptor& m, const Point& x,
                 double tol = 1e-10);

void check_on_manifold(const ManifoldDescriptor& m, const Point& x,
                       double tol = 1e-10);

/// Orthogonal projection of an ambient direction onto T_x M.
Point project_tangent(const ManifoldDescriptor& m, const Point& x,
                      const Point& d);
Point project_tangent(const ManifoldDescriptor& m, const SvdTriple& x,
                      const Point& d);

/// Second-order retraction. FixedSupport: x + eta. FixedRank and Parabola:
/// metric projection of x + eta back onto the manifold.
Point retract(const ManifoldDescriptor& m, const Point& x, const Point& eta);

/// Euclidean ambient distance; exact for FixedSupport (flat), a locally
/// equivalent surrogate for FixedRank and Parabola.
double riemannian_distance(const ManifoldDescriptor& m, const Point& x,
                           const Point& y);

Point euclid_to_rgrad(const ManifoldDescriptor& m, const Point& x,
                      const Point& egrad);

/// Riemannian Hessian-vector product of the restriction of a smooth h to M,
/// from the Euclidean gradient and Hessian-vector product at x.
Point euclid_to_rhessvec(const ManifoldDescriptor& m, const Point& x,
                         const Point& egrad, const Point& ehess_eta,
                         const Point& eta);
Point euclid_to_rhessvec(const ManifoldDescriptor& m, const SvdTriple& x,
                         const Point& egrad, const Point& ehess_eta,
                         const Point& eta);

/// Closest point on the parabola {x2 = x1^2} to p, via the stationarity
/// cubic 2u^3 + (1 - 2 p2) u - p1 = 0 solved with safeguarded
/// Newton + bisection.
Eigen::Vector2d project_to_parabola(const Eigen::Vector2d& p);

}  // namespace proxacc
