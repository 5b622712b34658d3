#include "proxacc/driver.hpp"

#include <chrono>
#include <cmath>

namespace proxacc {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::PG:
      return "pg";
    case Algorithm::APG:
      return "apg";
    case Algorithm::AltNewton:
      return "newton";
    case Algorithm::AltTruncatedNewton:
      return "tnewton";
  }
  return "?";
}

ProxResult prox_gradient_step(const CompositeProblem& problem, const Point& y,
                              double gamma, OracleCounters& c) {
  require(gamma > 0.0, "prox_gradient_step: gamma must be positive");
  const Point gy = problem.grad_f(y, c);
  ProxResult pr = problem.prox_g(y - gamma * gy, gamma, c);
  ++c.n_proxgrad_steps;
  return pr;
}

std::pair<ProxResult, LipschitzEstimate> backtrack_lipschitz(
    const CompositeProblem& problem, const Point& y, LipschitzEstimate est,
    OracleCounters& c) {
  require(est.L_est > 0.0, "backtrack_lipschitz: L must be positive");
  const Point gy = problem.grad_f(y, c);
  const double fy = problem.eval_f(y, c);
  ++c.n_proxgrad_steps;
  while (true) {
    const double gamma = 1.0 / est.L_est;
    ProxResult pr = problem.prox_g(y - gamma * gy, gamma, c);
    const Point dx = pr.point - y;
    const double fx = problem.eval_f(pr.point, c);
    if (fx <= fy + frob_inner(gy, dx) +
                  0.5 * est.L_est * dx.squaredNorm() + 1e-14 * std::abs(fy)) {
      return {std::move(pr), est};
    }
    est.L_est *= 2.0;
    ++est.n_backtracks;
    if (est.L_est > 1e30)
      throw NumericalFailure("backtrack_lipschitz: estimate diverged");
  }
}

QualificationReport check_structured_criticality(
    const CompositeProblem& problem, const Point& x,
    const ManifoldDescriptor& manifold, double gamma, OracleCounters& c) {
  return qualification_report(problem, x, manifold, gamma, c);
}

RunResult run(const CompositeProblem& problem, const Point& x0,
              const SolverConfig& cfg) {
  require(all_finite(x0), "run: non-finite initial point");
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  RunResult res;
  OracleCounters& c = res.counters;
  TraceAccumulator trace;

  const double fixed_L = problem.smooth->lipschitz_upper_bound();
  LipschitzEstimate lip{cfg.gamma_mode.L0, 0};

  Point y = x0;        // y_{k-1}
  Point x = x0;        // x_k
  Point x_prev = x0;   // APG inertia
  double t_apg = 1.0;
  double F_y = problem.eval_F(y, c);
  double curvature_state = 1.0;
  ManifoldDescriptor last_manifold = ManifoldDescriptor::full(
      problem.smooth->rows(), problem.smooth->cols());

  {
    IterationRecord r0;
    r0.iter = 0;
    r0.time_s = elapsed();
    r0.f_plus_g = F_y;
    if (cfg.f_star) r0.suboptimality = F_y - *cfg.f_star;
    r0.manifold = last_manifold;
    r0.manifold_dim = last_manifold.dim();
    r0.counters = c;
    r0.f_plus_g_at_y = F_y;
    trace.append(r0);
  }
  res.best_F = F_y;
  res.x = x0;
  res.final_manifold = last_manifold;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    double gamma;
    ProxResult pr;
    if (cfg.gamma_mode.fixed) {
      gamma = cfg.gamma_mode.gamma;
      pr = prox_gradient_step(problem, y, gamma, c);
    } else {
      if (k > 1) lip.L_est *= cfg.gamma_mode.shrink;
      auto [p, est] = backtrack_lipschitz(problem, y, lip, c);
      pr = std::move(p);
      lip = est;
      gamma = 1.0 / lip.L_est;
    }
    x = pr.point;
    const double step_norm = (x - y).norm();
    const double F_x = problem.eval_F(x, c);

    IterationRecord r;
    r.iter = k;
    r.time_s = elapsed();
    r.f_plus_g = F_x;
    if (cfg.f_star) r.suboptimality = F_x - *cfg.f_star;
    r.manifold = pr.manifold;
    r.manifold_dim = pr.manifold.dim();
    r.counters = c;
    r.gamma_used = gamma;
    r.lipschitz_est = cfg.gamma_mode.fixed ? fixed_L : lip.L_est;
    r.step_norm = step_norm;
    r.f_plus_g_at_y = F_y;

    res.x = x;
    res.final_manifold = pr.manifold;
    res.best_F = std::min(res.best_F, F_x);

    // Second clause: the update has reached the double-precision floor of
    // the iterate, so no tighter residual is resolvable.
    if (step_norm / gamma <= cfg.stop_grad_tol ||
        step_norm <= 1e-14 * (1.0 + x.norm())) {
      trace.append(r);
      res.converged = true;
      break;
    }

    // Manifold update y_k = ManAcc(x_k), or the baseline extrapolations.
    switch (cfg.algorithm) {
      case Algorithm::PG:
        y = x;
        F_y = F_x;
        break;
      case Algorithm::APG: {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_apg * t_apg));
        y = x + ((t_apg - 1.0) / t_next) * (x - x_prev);
        t_apg = t_next;
        F_y = F_x;  // not evaluated at the extrapolated point
        break;
      }
      case Algorithm::AltNewton:
      case Algorithm::AltTruncatedNewton: {
        if (pr.manifold != last_manifold) curvature_state = 1.0;
        ManAccOutcome out;
        try {
          if (cfg.algorithm == Algorithm::AltNewton) {
            out = manacc_newton(problem, pr.manifold, x, cfg.cg, cfg.ls, c);
          } else {
            out = manacc_newton_cg(problem, pr.manifold, x, cfg.cg, cfg.ls,
                                   curvature_state, c);
          }
        } catch (const NumericalFailure&) {
          // Numerically rank-deficient or degenerate manifold: skip the
          // acceleration; the next prox-gradient step re-identifies.
          out.y = x;
          out.F_at_y = F_x;
          out.progressed = false;
        }
        y = out.y;
        F_y = out.F_at_y;
        r.unit_step_accepted = out.unit_step;
        r.manacc_progressed = out.progressed;
        res.best_F = std::min(res.best_F, F_y);
        break;
      }
    }
    last_manifold = pr.manifold;
    x_prev = x;
    r.counters = c;  // include the manifold-update cost in this record
    trace.append(r);

    if (elapsed() > cfg.max_time_s) break;
  }

  res.trace = trace.records();
  return res;
}

}  // namespace proxacc
