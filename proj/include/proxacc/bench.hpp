#pragma once

#include <map>
#include <string>

#include "proxacc/driver.hpp"
#include "proxacc/smooth.hpp"

namespace proxacc {

enum class Family { TwoD, LogisticL1, TraceNorm };

const char* family_name(Family f);

struct ExperimentSpec {
  Family family = Family::TwoD;
  int n = 400;           // logistic features
  int m = 80;            // samples / measurements
  int n1 = 10, n2 = 12;  // trace-norm shape
  double lambda = 1e-2;
  double noise_std = 0.01;
  std::uint64_t seed = 1;
  int warm_start_iters = -1;  // -1: family default (35 logistic, 1000 trace)
  std::vector<Algorithm> algorithms = {Algorithm::PG, Algorithm::APG,
                                       Algorithm::AltNewton,
                                       Algorithm::AltTruncatedNewton};
  int max_iters = 20000;
  double max_time_s = 60.0;
  double tol1 = 1e-3;
  double tol2 = 1e-9;
};

struct ProblemInstance {
  CompositeProblem problem;
  Point x0;
  Family family;
  std::optional<double> known_f_star;  // analytic optimum when available
};

/// Standard-normal design, sparse ground truth with ceil(n/100) nonzeros,
/// Bernoulli labels, x0 from an APG warm start.
ProblemInstance generate_logistic(int n, int m, double lambda,
                                  std::uint64_t seed,
                                  int warm_start_iters = 35);

/// Standard-normal sensing stack, ground truth as a sum of
/// ceil(min(n1,n2)/2) rank-one terms, Gaussian noise, APG warm start.
ProblemInstance generate_tracenorm(int n1, int n2, int m, double lambda,
                                   double noise_std, std::uint64_t seed,
                                   int warm_start_iters = 1000);

/// 2-D piecewise-quadratic problem, x0 = (2, 3), known optimum F* = 0.
ProblemInstance generate_twod();

ProblemInstance generate_instance(const ExperimentSpec& spec);

SolverConfig solver_config_for(const ProblemInstance& inst, Algorithm algo,
                               const ExperimentSpec& spec);

struct AlgorithmOutcome {
  Algorithm algorithm;
  RunResult result;
  std::optional<double> time_to_tol1;
  std::optional<double> time_to_tol2;
  std::optional<int> iters_to_tol1;
  std::optional<int> iters_to_tol2;
};

struct ExperimentResult {
  double f_star = 0.0;
  std::vector<AlgorithmOutcome> outcomes;
};

/// Runs all requested algorithms, computes F* (known value or a
/// high-precision reference run plus the minimum F seen anywhere), fills the
/// suboptimality column post-hoc.
ExperimentResult run_algorithms(const ProblemInstance& inst,
                                const ExperimentSpec& spec);

/// Writes per-algorithm trace CSVs, the tolerance comparison table and a
/// run manifest into out_dir. Returns 0, or 3 on I/O failure.
int run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

struct ProfileTable {
  std::vector<std::string> algorithms;
  // per algorithm: sorted finite ratios t/t_best (unreached -> omitted)
  std::map<std::string, std::vector<double>> ratios;
  int n_instances = 0;

  /// Dolan-More ordinate: fraction of instances with ratio <= tau.
  double rho(const std::string& algo, double tau) const;
};

ProfileTable performance_profile(const std::vector<ExperimentSpec>& instances,
                                 double tol);

int write_profile(const ProfileTable& table, const std::string& out_dir);

/// Textual instance container (design/labels plus the seed) for
/// reproducibility; round-trips bit-exactly through the decimal format.
void save_instance(const ProblemInstance& inst, const ExperimentSpec& spec,
                   std::ostream& os);
ProblemInstance load_instance(std::istream& is);

}  // namespace proxacc
