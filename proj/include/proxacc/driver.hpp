#pragma once

#include "proxacc/newton_acc.hpp"
#include "proxacc/regularizers.hpp"

namespace proxacc {

enum class Algorithm { PG, APG, AltNewton, AltTruncatedNewton };

const char* algorithm_name(Algorithm a);

struct GammaMode {
  bool fixed = false;
  double gamma = 0.0;   // fixed mode
  double L0 = 1.0;      // backtracked mode seed
  double growth = 2.0;
  double shrink = 0.9;

  static GammaMode fixed_step(double g) {
    GammaMode m;
    m.fixed = true;
    m.gamma = g;
    return m;
  }
  static GammaMode backtracked(double L0) {
    GammaMode m;
    m.fixed = false;
    m.L0 = L0;
    return m;
  }
};

struct LipschitzEstimate {
  double L_est = 1.0;
  long n_backtracks = 0;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::PG;
  GammaMode gamma_mode;
  int max_iters = 10000;
  double max_time_s = 60.0;
  double stop_grad_tol = 1e-10;
  LineSearchParams ls;
  CgConfig cg;
  std::optional<double> f_star;  // enables the suboptimality column
};

struct RunResult {
  Point x;
  std::vector<IterationRecord> trace;
  ManifoldDescriptor final_manifold;
  OracleCounters counters;
  bool converged = false;
  double best_F = 0.0;
};

/// One structure-revealing step x = prox_{gamma g}(y - gamma grad f(y));
/// costs exactly one grad f and one prox.
ProxResult prox_gradient_step(const CompositeProblem& problem, const Point& y,
                              double gamma, OracleCounters& c);

/// Doubles L_est until the sufficient-decrease certificate
/// f(x+) <= f(y) + <grad f(y), x+ - y> + L/2 ||x+ - y||^2 holds for the prox
/// step with gamma = 1/L_est.
std::pair<ProxResult, LipschitzEstimate> backtrack_lipschitz(
    const CompositeProblem& problem, const Point& y, LipschitzEstimate est,
    OracleCounters& c);

/// Outer loop: PG, APG, or prox-gradient alternated with a manifold Newton
/// update (Alt variants).
RunResult run(const CompositeProblem& problem, const Point& x0,
              const SolverConfig& cfg);

QualificationReport check_structured_criticality(
    const CompositeProblem& problem, const Point& x,
    const ManifoldDescriptor& manifold, double gamma, OracleCounters& c);

}  // namespace proxacc
