#include "proxacc/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace proxacc {

const char* family_name(Family f) {
  switch (f) {
    case Family::TwoD:
      return "twod";
    case Family::LogisticL1:
      return "logistic";
    case Family::TraceNorm:
      return "tracenorm";
  }
  return "?";
}

namespace {

Point apg_warm_start(const CompositeProblem& problem, const Point& start,
                     int iters) {
  if (iters <= 0) return start;
  SolverConfig cfg;
  cfg.algorithm = Algorithm::APG;
  cfg.gamma_mode = GammaMode::backtracked(problem.smooth->lipschitz_upper_bound());
  cfg.max_iters = iters;
  cfg.max_time_s = 1e9;
  cfg.stop_grad_tol = 0.0;
  return run(problem, start, cfg).x;
}

}  // namespace

ProblemInstance generate_logistic(int n, int m, double lambda,
                                  std::uint64_t seed, int warm_start_iters) {
  require(n >= 1 && m >= 1, "generate_logistic: sizes must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::MatrixXd A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = normal(rng);

  // Sparse ground truth with ceil(n/100) nonzeros.
  const int k = (n + 99) / 100;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int j = 0; j < k; ++j) s(idx[j]) = normal(rng);

  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double p = sigmoid(A.row(i).dot(s));
    y(i) = unif(rng) < p ? 1.0 : -1.0;
  }

  ProblemInstance inst;
  inst.family = Family::LogisticL1;
  inst.problem.smooth = std::make_shared<LogisticOracle>(std::move(A),
                                                         std::move(y));
  inst.problem.nonsmooth = std::make_shared<L1Norm>();
  inst.problem.lambda = lambda;

  Point start(n, 1);
  for (int j = 0; j < n; ++j) start(j, 0) = normal(rng);
  inst.x0 = apg_warm_start(inst.problem, start, warm_start_iters);
  return inst;
}

ProblemInstance generate_tracenorm(int n1, int n2, int m, double lambda,
                                   double noise_std, std::uint64_t seed,
                                   int warm_start_iters) {
  require(n1 >= 1 && n2 >= 1 && m >= 1, "generate_tracenorm: invalid sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Eigen::MatrixXd> sensing(m);
  for (int i = 0; i < m; ++i) {
    sensing[i].resize(n1, n2);
    for (int p = 0; p < n1; ++p)
      for (int q = 0; q < n2; ++q) sensing[i](p, q) = normal(rng);
  }

  // Low-rank ground truth: a sum of ceil(min(n1,n2)/2) rank-one terms.
  const int k = (std::min(n1, n2) + 1) / 2;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n1, n2);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd u(n1), v(n2);
    for (int p = 0; p < n1; ++p) u(p) = normal(rng);
    for (int q = 0; q < n2; ++q) v(q) = normal(rng);
    s += u * v.transpose() / std::sqrt(static_cast<double>(n1 * n2));
  }

  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i)
    y(i) = frob_inner(sensing[i], s) + noise_std * normal(rng);

  ProblemInstance inst;
  inst.family = Family::TraceNorm;
  inst.problem.smooth =
      std::make_shared<MatrixRegressionOracle>(std::move(sensing),
                                               std::move(y));
  inst.problem.nonsmooth = std::make_shared<NuclearNorm>();
  inst.problem.lambda = lambda;

  Point start(n1, n2);
  for (int p = 0; p < n1; ++p)
    for (int q = 0; q < n2; ++q) start(p, q) = normal(rng);
  inst.x0 = apg_warm_start(inst.problem, start, warm_start_iters);
  return inst;
}

ProblemInstance generate_twod() {
  ProblemInstance inst;
  inst.family = Family::TwoD;
  inst.problem.smooth = std::make_shared<Quad2DOracle>();
  inst.problem.nonsmooth = std::make_shared<AbsParabola>();
  inst.problem.lambda = 1.0;
  inst.x0.resize(2, 1);
  inst.x0 << 2.0, 3.0;
  inst.known_f_star = 0.0;
  return inst;
}

ProblemInstance generate_instance(const ExperimentSpec& spec) {
  switch (spec.family) {
    case Family::TwoD:
      return generate_twod();
    case Family::LogisticL1:
      return generate_logistic(spec.n, spec.m, spec.lambda, spec.seed,
                               spec.warm_start_iters < 0
                                   ? 35
                                   : spec.warm_start_iters);
    case Family::TraceNorm:
      return generate_tracenorm(spec.n1, spec.n2, spec.m, spec.lambda,
                                spec.noise_std, spec.seed,
                                spec.warm_start_iters < 0
                                    ? 1000
                                    : spec.warm_start_iters);
  }
  throw ContractViolation("unknown family");
}

SolverConfig solver_config_for(const ProblemInstance& inst, Algorithm algo,
                               const ExperimentSpec& spec) {
  SolverConfig cfg;
  cfg.algorithm = algo;
  cfg.max_iters = spec.max_iters;
  cfg.max_time_s = spec.max_time_s;
  cfg.stop_grad_tol = 1e-13;
  if (inst.family == Family::TwoD) {
    cfg.gamma_mode = GammaMode::fixed_step(0.05);
    cfg.cg.max_iters = 50;
  } else {
    cfg.gamma_mode =
        GammaMode::backtracked(inst.problem.smooth->lipschitz_upper_bound());
    cfg.cg.max_iters = inst.family == Family::TraceNorm ? 150 : 50;
  }
  if (algo == Algorithm::AltTruncatedNewton) cfg.cg.adaptive_curvature = true;
  return cfg;
}

namespace {

std::optional<std::pair<int, double>> first_crossing(
    const std::vector<IterationRecord>& trace, double f_star, double tol) {
  for (const auto& r : trace)
    if (r.f_plus_g - f_star <= tol) return std::make_pair(r.iter, r.time_s);
  return std::nullopt;
}

}  // namespace

ExperimentResult run_algorithms(const ProblemInstance& inst,
                                const ExperimentSpec& spec) {
  ExperimentResult out;

  double f_star;
  if (inst.known_f_star) {
    f_star = *inst.known_f_star;
  } else {
    SolverConfig ref =
        solver_config_for(inst, Algorithm::AltTruncatedNewton, spec);
    ref.stop_grad_tol = 1e-13;
    f_star = run(inst.problem, inst.x0, ref).best_F;
  }

  for (Algorithm a : spec.algorithms) {
    AlgorithmOutcome ao;
    ao.algorithm = a;
    ao.result = run(inst.problem, inst.x0, solver_config_for(inst, a, spec));
    f_star = std::min(f_star, ao.result.best_F);
    out.outcomes.push_back(std::move(ao));
  }
  out.f_star = f_star;

  for (auto& ao : out.outcomes) {
    for (auto& r : ao.result.trace) r.suboptimality = r.f_plus_g - f_star;
    if (auto c = first_crossing(ao.result.trace, f_star, spec.tol1)) {
      ao.iters_to_tol1 = c->first;
      ao.time_to_tol1 = c->second;
    }
    if (auto c = first_crossing(ao.result.trace, f_star, spec.tol2)) {
      ao.iters_to_tol2 = c->first;
      ao.time_to_tol2 = c->second;
    }
  }
  return out;
}

namespace {

void write_manifest(const ExperimentSpec& spec, double f_star,
                    std::ostream& os) {
  nlohmann::json j;
  j["family"] = family_name(spec.family);
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["n1"] = spec.n1;
  j["n2"] = spec.n2;
  j["lambda"] = spec.lambda;
  j["noise_std"] = spec.noise_std;
  j["seed"] = spec.seed;
  j["warm_start_iters"] = spec.warm_start_iters;
  j["rng"] = "mt19937_64 + std::normal_distribution (platform stream)";
  j["tol1"] = spec.tol1;
  j["tol2"] = spec.tol2;
  j["f_star"] = f_star;
  std::vector<std::string> algos;
  for (Algorithm a : spec.algorithms) algos.push_back(algorithm_name(a));
  j["algorithms"] = algos;
  os << j.dump(2) << '\n';
}

void write_table(const ExperimentResult& res, const ExperimentSpec& spec,
                 std::ostream& os) {
  os << "algorithm,tol,iter,time_s,n_proxgrad,n_manacc,n_hessvec,n_f,n_g\n";
  for (const auto& ao : res.outcomes) {
    for (int which = 0; which < 2; ++which) {
      const double tol = which == 0 ? spec.tol1 : spec.tol2;
      const auto& it = which == 0 ? ao.iters_to_tol1 : ao.iters_to_tol2;
      os << algorithm_name(ao.algorithm) << ',' << tol << ',';
      if (!it) {
        os << "unreached,,,,,,\n";
        continue;
      }
      const auto& rec = ao.result.trace[static_cast<size_t>(*it)];
      os << rec.iter << ',' << rec.time_s << ','
         << rec.counters.n_proxgrad_steps << ','
         << rec.counters.n_manacc_steps << ',' << rec.counters.n_hess_vec
         << ',' << rec.counters.n_f_evals << ',' << rec.counters.n_g_evals
         << '\n';
    }
  }
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "cannot create " << out_dir << ": " << ec.message() << '\n';
    return 3;
  }
  try {
    const ProblemInstance inst = generate_instance(spec);
    const ExperimentResult res = run_algorithms(inst, spec);

    for (const auto& ao : res.outcomes) {
      const std::string path = out_dir + "/" + family_name(spec.family) +
                               "_" + algorithm_name(ao.algorithm) + ".csv";
      std::ofstream os(path);
      if (!os) return 3;
      write_trace_csv(os, ao.result.trace);
    }
    {
      std::ofstream os(out_dir + "/table.csv");
      if (!os) return 3;
      write_table(res, spec, os);
    }
    {
      std::ofstream os(out_dir + "/manifest.json");
      if (!os) return 3;
      write_manifest(spec, res.f_star, os);
    }
    if (spec.family != Family::TwoD) {
      std::ofstream os(out_dir + "/instance.txt");
      if (!os) return 3;
      save_instance(inst, spec, os);
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

double ProfileTable::rho(const std::string& algo, double tau) const {
  const auto it = ratios.find(algo);
  if (it == ratios.end() || n_instances == 0) return 0.0;
  const auto& v = it->second;
  const auto n_le =
      std::upper_bound(v.begin(), v.end(), tau) - v.begin();
  return static_cast<double>(n_le) / n_instances;
}

ProfileTable performance_profile(const std::vector<ExperimentSpec>& instances,
                                 double tol) {
  require(instances.size() >= 2, "profile: need at least 2 instances");
  ProfileTable table;
  for (Algorithm a : instances.front().algorithms)
    table.algorithms.push_back(algorithm_name(a));
  require(table.algorithms.size() >= 2, "profile: need at least 2 algorithms");

  for (const auto& spec0 : instances) {
    ExperimentSpec spec = spec0;
    spec.tol2 = tol;
    const ProblemInstance inst = generate_instance(spec);
    const ExperimentResult res = run_algorithms(inst, spec);

    double t_best = std::numeric_limits<double>::infinity();
    for (const auto& ao : res.outcomes)
      if (ao.time_to_tol2) t_best = std::min(t_best, *ao.time_to_tol2);
    if (!std::isfinite(t_best)) {
      std::cerr << "profile: all algorithms failed on seed " << spec.seed
                << ", instance dropped\n";
      continue;
    }
    ++table.n_instances;
    for (const auto& ao : res.outcomes) {
      if (!ao.time_to_tol2) continue;  // unreached -> ratio +inf, omitted
      const double denom = std::max(t_best, 1e-12);
      table.ratios[algorithm_name(ao.algorithm)].push_back(
          std::max(1.0, *ao.time_to_tol2 / denom));
    }
  }
  for (auto& [_, v] : table.ratios) std::sort(v.begin(), v.end());
  return table;
}

int write_profile(const ProfileTable& table, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return 3;
  std::ofstream os(out_dir + "/profile.csv");
  if (!os) return 3;
  // Sample the step function at the union of all breakpoints.
  std::vector<double> taus = {1.0};
  for (const auto& [_, v] : table.ratios)
    taus.insert(taus.end(), v.begin(), v.end());
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  os << "tau";
  for (const auto& a : table.algorithms) os << ',' << a;
  os << '\n';
  os.precision(17);
  for (double tau : taus) {
    os << tau;
    for (const auto& a : table.algorithms) os << ',' << table.rho(a, tau);
    os << '\n';
  }
  return 0;
}

// ------------------------------------------------------- instance files

namespace {

void write_matrix(std::ostream& os, const Eigen::MatrixXd& A) {
  os.precision(17);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      os << (j ? " " : "") << A(i, j);
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& is, Eigen::Index rows,
                            Eigen::Index cols) {
  Eigen::MatrixXd A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(is >> A(i, j)))
        throw NumericalFailure("instance file truncated");
  return A;
}

}  // namespace

void save_instance(const ProblemInstance& inst, const ExperimentSpec& spec,
                   std::ostream& os) {
  os << "proxacc-instance v1\n";
  os << "family " << family_name(inst.family) << '\n';
  os << "seed " << spec.seed << '\n';
  os.precision(17);
  os << "lambda " << inst.problem.lambda << '\n';
  if (inst.family == Family::LogisticL1) {
    const auto* f =
        dynamic_cast<const LogisticOracle*>(inst.problem.smooth.get());
    require(f != nullptr, "save_instance: oracle mismatch");
    os << "dims " << f->A().rows() << ' ' << f->A().cols() << '\n';
    write_matrix(os, f->A());
    write_matrix(os, f->labels());
    write_matrix(os, inst.x0);
  } else if (inst.family == Family::TraceNorm) {
    const auto* f = dynamic_cast<const MatrixRegressionOracle*>(
        inst.problem.smooth.get());
    require(f != nullptr, "save_instance: oracle mismatch");
    os << "dims " << f->rows() << ' ' << f->cols() << ' '
       << f->targets().size() << '\n';
    for (const auto& Ai : f->sensing()) write_matrix(os, Ai);
    write_matrix(os, f->targets());
    write_matrix(os, inst.x0);
  } else {
    throw ContractViolation("save_instance: unsupported family");
  }
}

ProblemInstance load_instance(std::istream& is) {
  std::string header, version, kw, family;
  is >> header >> version;
  require(header == "proxacc-instance" && version == "v1",
          "load_instance: bad header");
  std::uint64_t seed;
  double lambda;
  is >> kw >> family >> kw >> seed >> kw >> lambda;

  ProblemInstance inst;
  inst.problem.lambda = lambda;
  if (family == "logistic") {
    Eigen::Index m, n;
    is >> kw >> m >> n;
    Eigen::MatrixXd A = read_matrix(is, m, n);
    Eigen::VectorXd y = read_matrix(is, m, 1);
    inst.x0 = read_matrix(is, n, 1);
    inst.family = Family::LogisticL1;
    inst.problem.smooth = std::make_shared<LogisticOracle>(std::move(A),
                                                           std::move(y));
    inst.problem.nonsmooth = std::make_shared<L1Norm>();
  } else if (family == "tracenorm") {
    Eigen::Index n1, n2, m;
    is >> kw >> n1 >> n2 >> m;
    std::vector<Eigen::MatrixXd> sensing;
    sensing.reserve(static_cast<size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
      sensing.push_back(read_matrix(is, n1, n2));
    Eigen::VectorXd y = read_matrix(is, m, 1);
    inst.x0 = read_matrix(is, n1, n2);
    inst.family = Family::TraceNorm;
    inst.problem.smooth = std::make_shared<MatrixRegressionOracle>(
        std::move(sensing), std::move(y));
    inst.problem.nonsmooth = std::make_shared<NuclearNorm>();
  } else {
    throw NumericalFailure("load_instance: unknown family " + family);
  }
  return inst;
}

}  // namespace proxacc
