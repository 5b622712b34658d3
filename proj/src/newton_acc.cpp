#include "proxacc/newton_acc.hpp"

#include <cmath>
#include <limits>

#include "proxacc/svd_diff.hpp"

namespace proxacc {

CgResult riemannian_cg_solve(const Point& grad, const TangentOperator& hessvec,
                             const CgConfig& cfg, double target_residual) {
  require(target_residual >= 0.0, "cg: negative residual target");
  CgResult out;
  out.d = Point::Zero(grad.rows(), grad.cols());
  Point r = grad;  // residual of Hess d + grad at d = 0
  double rr = r.squaredNorm();
  if (std::sqrt(rr) <= target_residual) {
    out.stop = CgStop::residual_met;
    return out;
  }
  Point p = -r;
  for (int k = 0; k < cfg.max_iters; ++k) {
    const Point Hp = hessvec(p);
    const double pHp = frob_inner(p, Hp);
    const double pp = p.squaredNorm();
    if (pHp / pp < cfg.curvature_threshold) {
      // Quasi-negative curvature: truncate; steepest descent on first pass.
      if (k == 0) out.d = -grad;
      out.stop = CgStop::negative_curvature;
      out.iters = k;
      return out;
    }
    const double a = rr / pHp;
    out.d += a * p;
    r += a * Hp;
    const double rr_new = r.squaredNorm();
    out.iters = k + 1;
    if (std::sqrt(rr_new) <= target_residual) {
      out.stop = CgStop::residual_met;
      return out;
    }
    p = -r + (rr_new / rr) * p;
    rr = rr_new;
  }
  out.stop = CgStop::max_iters;
  return out;
}

ArmijoResult armijo_backtracking(double F_at_x, double slope,
                                 const LineSearchParams& params,
                                 const std::function<double(double)>& phi) {
  require(slope < 0.0, "armijo: slope must be negative");
  require(params.m1 > 0.0 && params.m1 < 0.5, "armijo: m1 out of (0, 1/2)");

  ArmijoResult out;
  double alpha = 1.0;
  double phi_a = phi(alpha);
  ++out.trials;
  double alpha_prev = 0.0, phi_prev = 0.0;
  bool have_prev = false;

  while (true) {
    if (std::isfinite(phi_a) &&
        phi_a <= F_at_x + params.m1 * alpha * slope) {
      out.alpha = alpha;
      out.success = true;
      return out;
    }
    if (alpha < params.alpha_min || out.trials >= params.max_trials) {
      out.success = false;
      return out;
    }
    double alpha_new;
    if (!have_prev) {
      // Quadratic model through phi(0), phi'(0), phi(alpha).
      const double denom = 2.0 * (phi_a - F_at_x - slope * alpha);
      alpha_new = (std::isfinite(denom) && denom > 0.0)
                      ? -slope * alpha * alpha / denom
                      : params.backtrack_hi * alpha;
    } else {
      // Cubic model through phi(0), phi'(0) and the last two trials.
      const double t1 = phi_a - F_at_x - slope * alpha;
      const double t2 = phi_prev - F_at_x - slope * alpha_prev;
      const double da = alpha - alpha_prev;
      double a = 0.0, b = 0.0;
      if (std::isfinite(t1) && std::isfinite(t2) && da != 0.0) {
        a = (t1 / (alpha * alpha) - t2 / (alpha_prev * alpha_prev)) / da;
        b = (-alpha_prev * t1 / (alpha * alpha) +
             alpha * t2 / (alpha_prev * alpha_prev)) /
            da;
      }
      if (a == 0.0) {
        alpha_new = (b != 0.0) ? -slope / (2.0 * b)
                               : params.backtrack_hi * alpha;
      } else {
        const double disc = b * b - 3.0 * a * slope;
        alpha_new = disc >= 0.0 ? (-b + std::sqrt(disc)) / (3.0 * a)
                                : params.backtrack_hi * alpha;
      }
    }
    if (!std::isfinite(alpha_new)) alpha_new = params.backtrack_hi * alpha;
    alpha_new = std::min(alpha_new, params.backtrack_hi * alpha);
    alpha_new = std::max(alpha_new, params.backtrack_lo * alpha);

    alpha_prev = alpha;
    phi_prev = phi_a;
    have_prev = std::isfinite(phi_a);
    alpha = alpha_new;
    phi_a = phi(alpha);
    ++out.trials;
  }
}

RiemannianRestriction::RiemannianRestriction(const CompositeProblem& problem,
                                             const ManifoldDescriptor& manifold,
                                             const Point& x,
                                             OracleCounters& counters)
    : problem_(problem), manifold_(manifold), x_(x), counters_(counters) {
  if (manifold.kind == ManifoldDescriptor::Kind::FixedRank &&
      manifold.rank > 0)
    svd_ = thin_svd(x, manifold.rank);
  egrad_f_ = problem.grad_f(x, counters);
  ++counters.n_rgrad;
  Point pg = svd_ ? project_tangent(manifold, *svd_, egrad_f_)
                  : project_tangent(manifold, x, egrad_f_);
  rgrad_ = pg + problem.lambda * problem.nonsmooth->rgrad(
                    manifold, x, svd_ ? &*svd_ : nullptr);
}

Point RiemannianRestriction::hessvec(const Point& eta) const {
  ++counters_.n_hess_vec;
  const Point ehess = problem_.hessvec_f(x_, eta, counters_);
  Point out = svd_ ? euclid_to_rhessvec(manifold_, *svd_, egrad_f_, ehess, eta)
                   : euclid_to_rhessvec(manifold_, x_, egrad_f_, ehess, eta);
  out += problem_.lambda * problem_.nonsmooth->rhess(
             manifold_, x_, eta, svd_ ? &*svd_ : nullptr);
  return out;
}

namespace {

ManAccOutcome manacc_impl(const CompositeProblem& problem,
                          const ManifoldDescriptor& manifold, const Point& x,
                          const CgConfig& cfg, const LineSearchParams& ls,
                          double curvature_threshold, double target_residual,
                          OracleCounters& counters) {
  ++counters.n_manacc_steps;
  ManAccOutcome out;
  out.y = x;

  const RiemannianRestriction R(problem, manifold, x, counters);
  const double gn = R.grad_norm();
  if (gn <= 1e-14) {
    out.progressed = true;
    out.F_at_y = problem.eval_F(x, counters);
    return out;
  }

  CgConfig cg_cfg = cfg;
  cg_cfg.curvature_threshold = curvature_threshold;
  const CgResult cg = riemannian_cg_solve(
      R.grad(), [&](const Point& v) { return R.hessvec(v); }, cg_cfg,
      target_residual);
  out.cg_iters = cg.iters;
  out.stop_reason = cg.stop;

  Point d = cg.d;
  double slope = frob_inner(R.grad(), d);
  if (!(slope < 0.0)) {  // numerical safety net; CG output should descend
    d = -R.grad();
    slope = -gn * gn;
  }
  out.direction_norm = d.norm();

  const double F_x = problem.eval_F(x, counters);
  double last_alpha = std::numeric_limits<double>::quiet_NaN();
  double last_value = std::numeric_limits<double>::quiet_NaN();
  Point last_point;
  auto phi = [&](double alpha) {
    try {
      last_point = retract(manifold, x, alpha * d);
      last_value = problem.eval_F(last_point, counters);
    } catch (const NumericalFailure&) {
      last_value = std::numeric_limits<double>::infinity();
    }
    last_alpha = alpha;
    return last_value;
  };
  const ArmijoResult lsres = armijo_backtracking(F_x, slope, ls, phi);
  if (!lsres.success) {
    out.progressed = false;
    out.F_at_y = F_x;
    return out;
  }
  out.alpha = lsres.alpha;
  out.unit_step = lsres.alpha == 1.0;
  if (last_alpha == lsres.alpha && std::isfinite(last_value)) {
    out.y = last_point;
    out.F_at_y = last_value;
  } else {
    out.y = retract(manifold, x, lsres.alpha * d);
    out.F_at_y = problem.eval_F(out.y, counters);
  }
  out.progressed = true;
  return out;
}

}  // namespace

ManAccOutcome manacc_newton(const CompositeProblem& problem,
                            const ManifoldDescriptor& manifold, const Point& x,
                            const CgConfig& cfg, const LineSearchParams& ls,
                            OracleCounters& counters) {
  // A cheap gradient-norm probe to set the near-exact residual target.
  OracleCounters scratch;
  const RiemannianRestriction probe(problem, manifold, x, scratch);
  const double gn = probe.grad_norm();
  return manacc_impl(problem, manifold, x, cfg, ls, 1e-15,
                     1e-15 * std::max(1.0, gn), counters);
}

ManAccOutcome manacc_newton_cg(const CompositeProblem& problem,
                               const ManifoldDescriptor& manifold,
                               const Point& x, const CgConfig& cfg,
                               const LineSearchParams& ls,
                               double& curvature_threshold_state,
                               OracleCounters& counters) {
  OracleCounters scratch;
  const RiemannianRestriction probe(problem, manifold, x, scratch);
  const double gn = probe.grad_norm();
  const double eta = std::min(0.5, std::pow(gn, cfg.forcing_theta));
  ManAccOutcome out = manacc_impl(problem, manifold, x, cfg, ls,
                                  curvature_threshold_state, eta * gn,
                                  counters);
  if (out.unit_step) curvature_threshold_state /= 10.0;
  return out;
}

}  // namespace proxacc
