#pragma once

#include <functional>

#include "proxacc/problem.hpp"

namespace proxacc {

struct LineSearchParams {
  double m1 = 1e-4;  // Armijo constant, 0 < m1 < 1/2
  double alpha_min = 1e-16;
  double backtrack_lo = 0.1;
  double backtrack_hi = 0.5;
  int max_trials = 60;
};

struct CgConfig {
  int max_iters = 50;
  double curvature_threshold = 1e-15;
  double forcing_theta = 1.0;   // eta = min(0.5, ||grad||^theta)
  bool adaptive_curvature = false;
};

enum class CgStop { residual_met, max_iters, negative_curvature };

struct CgResult {
  Point d;
  CgStop stop = CgStop::residual_met;
  int iters = 0;
};

/// Tangent-space linear operator; inputs and outputs in the ambient
/// representation, both tangent at the base point.
using TangentOperator = std::function<Point(const Point&)>;

/// Truncated conjugate gradient for Hess[d] = -grad on a tangent space.
/// Truncates when a search direction p has curvature ratio
/// <Hess[p], p>/||p||^2 below cfg.curvature_threshold; if that happens on
/// the first direction, returns -grad (steepest descent fallback).
CgResult riemannian_cg_solve(const Point& grad, const TangentOperator& hessvec,
                             const CgConfig& cfg, double target_residual);

struct ArmijoResult {
  double alpha = 0.0;
  int trials = 0;
  bool success = false;
};

/// Backtracking line search with unit initial step, quadratic then cubic
/// interpolation, safeguarded to [lo*alpha, hi*alpha].
/// phi(alpha) = F(R_x(alpha d)); slope = <grad F(x), d> must be negative.
ArmijoResult armijo_backtracking(double F_at_x, double slope,
                                 const LineSearchParams& params,
                                 const std::function<double(double)>& phi);

struct ManAccOutcome {
  Point y;
  double direction_norm = 0.0;
  double alpha = 0.0;
  int cg_iters = 0;
  CgStop stop_reason = CgStop::residual_met;
  bool progressed = false;    // false: line search failed, y == x
  bool unit_step = false;     // alpha == 1 accepted
  double F_at_y = 0.0;
};

/// Riemannian gradient and Hessian-vector products of F = f + lambda g
/// restricted to the manifold, with the fixed-rank SVD computed once.
class RiemannianRestriction {
 public:
  RiemannianRestriction(const CompositeProblem& problem,
                        const ManifoldDescriptor& manifold, const Point& x,
                        OracleCounters& counters);

  Point grad() const { return rgrad_; }
  Point hessvec(const Point& eta) const;
  double grad_norm() const { return rgrad_.norm(); }

 private:
  const CompositeProblem& problem_;
  const ManifoldDescriptor& manifold_;
  const Point& x_;
  OracleCounters& counters_;
  Point egrad_f_;
  Point rgrad_;
  std::optional<SvdTriple> svd_;
};

/// Alg. "ManAcc-Newton": near-exact tangent Newton system (residual target
/// 1e-15 * max(1, ||grad||), curvature threshold 1e-15) plus Armijo search.
ManAccOutcome manacc_newton(const CompositeProblem& problem,
                            const ManifoldDescriptor& manifold, const Point& x,
                            const CgConfig& cfg, const LineSearchParams& ls,
                            OracleCounters& counters);

/// Alg. "ManAcc-Newton-CG": forcing term eta = min(0.5, ||grad||^theta),
/// adaptive curvature threshold carried by the caller (divided by 10 on each
/// unit-step acceptance).
ManAccOutcome manacc_newton_cg(const CompositeProblem& problem,
                               const ManifoldDescriptor& manifold,
                               const Point& x, const CgConfig& cfg,
                               const LineSearchParams& ls,
                               double& curvature_threshold_state,
                               OracleCounters& counters);

}  // namespace proxacc
