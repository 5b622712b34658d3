#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "proxacc/bench.hpp"
#include "proxacc/regularizers.hpp"
#include "proxacc/smooth.hpp"

using namespace proxacc;

namespace {

CompositeProblem twod_problem() {
  CompositeProblem p;
  p.smooth = std::make_shared<Quad2DOracle>();
  p.nonsmooth = std::make_shared<AbsParabola>();
  p.lambda = 1.0;
  return p;
}

}  // namespace

TEST_CASE("evaluate_F on the 2-D problem") {
  const CompositeProblem p = twod_problem();
  OracleCounters c;

  Point x = Point::Zero(2, 1);
  CHECK(p.eval_F(x, c) == 0.0);

  x << 2.0, 3.0;
  CHECK(p.eval_F(x, c) == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(c.n_f_evals == 2);
  CHECK(c.n_g_evals == 2);
}

TEST_CASE("evaluate_F on logistic at zero is log 2") {
  const ProblemInstance inst = generate_logistic(20, 10, 0.1, 42, 0);
  OracleCounters c;
  const Point x = Point::Zero(20, 1);
  CHECK(inst.problem.eval_F(x, c) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("evaluate_F rejects shape mismatch and non-finite points") {
  const CompositeProblem p = twod_problem();
  OracleCounters c;
  CHECK_THROWS_AS(p.eval_F(Point::Zero(3, 1), c), ContractViolation);
  Point bad(2, 1);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.eval_F(bad, c), ContractViolation);
}

TEST_CASE("evaluate_F is deterministic") {
  const ProblemInstance inst = generate_logistic(50, 30, 0.1, 7, 0);
  OracleCounters c;
  Point x(50, 1);
  for (int i = 0; i < 50; ++i) x(i, 0) = std::sin(i + 1.0);
  const double a = inst.problem.eval_F(x, c);
  const double b = inst.problem.eval_F(x, c);
  CHECK(a == b);
}

TEST_CASE("trace accumulator") {
  TraceAccumulator trace;
  OracleCounters c;
  c.n_f_evals = 3;

  IterationRecord r;
  r.iter = 0;
  r.time_s = 0.5;
  r.counters = c;
  r.manifold = ManifoldDescriptor::full(2, 1);
  r.manifold_dim = 2;
  trace.append(r);
  CHECK(trace.records().size() == 1);
  CHECK(trace.records()[0].iter == 0);
  CHECK(trace.records()[0].counters.n_f_evals == 3);

  r.iter = 1;
  r.time_s = 0.7;
  trace.append(r);
  CHECK(trace.records().size() == 2);

  // time going backward is rejected
  r.time_s = 0.1;
  CHECK_THROWS_AS(trace.append(r), ContractViolation);
}

TEST_CASE("manifold dim matches the fixed-support count") {
  std::vector<int> I(3751);
  std::iota(I.begin(), I.end(), 0);
  const auto m = ManifoldDescriptor::fixed_support(I, 4000);
  CHECK(m.dim() == 249);
}

TEST_CASE("trace CSV schema") {
  IterationRecord r;
  r.iter = 0;
  r.time_s = 0.25;
  r.f_plus_g = 1.5;
  r.suboptimality = 0.5;
  r.manifold_dim = 3;
  std::ostringstream os;
  write_trace_csv(os, {r});
  const std::string s = os.str();
  CHECK(s.find("iter,time_s,F,subopt,manifold_dim,n_proxgrad,n_manacc,"
               "n_hessvec,n_f,n_g") == 0);
  CHECK(s.find("0,0.25,1.5,0.5,3,0,0,0,0,0") != std::string::npos);
}

TEST_CASE("counters are monotone across a solver run") {
  const ProblemInstance inst = generate_twod();
  SolverConfig cfg;
  cfg.algorithm = Algorithm::AltNewton;
  cfg.gamma_mode = GammaMode::fixed_step(0.05);
  cfg.max_iters = 50;
  const RunResult res = run(inst.problem, inst.x0, cfg);
  for (size_t k = 1; k < res.trace.size(); ++k)
    CHECK(res.trace[k].counters.dominates(res.trace[k - 1].counters));
}
