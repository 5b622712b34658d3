// Benchmark harness: generates synthetic instances of the three problem
// families, runs the four solvers, and writes trace CSVs, comparison tables
// and performance-profile data.

#include <CLI11.hpp>

#include <iostream>

#include "proxacc/bench.hpp"

namespace {

proxacc::Family parse_family(const std::string& s) {
  if (s == "twod") return proxacc::Family::TwoD;
  if (s == "logistic") return proxacc::Family::LogisticL1;
  if (s == "tracenorm") return proxacc::Family::TraceNorm;
  throw CLI::ValidationError("family", "expected twod|logistic|tracenorm");
}

std::vector<proxacc::Algorithm> parse_algos(const std::string& csv) {
  std::vector<proxacc::Algorithm> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "pg")
      out.push_back(proxacc::Algorithm::PG);
    else if (tok == "apg")
      out.push_back(proxacc::Algorithm::APG);
    else if (tok == "newton")
      out.push_back(proxacc::Algorithm::AltNewton);
    else if (tok == "tnewton")
      out.push_back(proxacc::Algorithm::AltTruncatedNewton);
    else
      throw CLI::ValidationError("algos", "unknown algorithm " + tok);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite optimization benchmark"};
  app.require_subcommand(1);

  std::string family_str = "twod";
  std::string algos_str = "pg,apg,newton,tnewton";
  std::string out_dir = "out";
  proxacc::ExperimentSpec spec;

  CLI::App* bench = app.add_subcommand("bench", "run one instance");
  bench->add_option("family", family_str, "twod|logistic|tracenorm")
      ->required();
  bench->add_option("--n", spec.n, "logistic feature count");
  bench->add_option("--m", spec.m, "sample/measurement count");
  bench->add_option("--n1", spec.n1, "trace-norm rows");
  bench->add_option("--n2", spec.n2, "trace-norm cols");
  bench->add_option("--lambda", spec.lambda, "regularization weight");
  bench->add_option("--seed", spec.seed, "instance seed");
  bench->add_option("--warm-start", spec.warm_start_iters,
                    "APG warm-start iterations (-1: family default)");
  bench->add_option("--algos", algos_str, "comma list: pg,apg,newton,tnewton");
  bench->add_option("--max-iters", spec.max_iters, "outer iteration budget");
  bench->add_option("--max-time", spec.max_time_s, "per-run seconds budget");
  bench->add_option("--tol1", spec.tol1, "first table tolerance");
  bench->add_option("--tol2", spec.tol2, "second table tolerance");
  bench->add_option("--out", out_dir, "output directory")->required();

  std::string pfamily_str = "tracenorm";
  int n_instances = 20;
  double ptol = 1e-9;
  std::uint64_t pseed0 = 1;
  CLI::App* profile =
      app.add_subcommand("profile", "performance profile over seeds");
  profile->add_option("--family", pfamily_str, "twod|logistic|tracenorm");
  profile->add_option("--instances", n_instances, "number of seeds");
  profile->add_option("--tol", ptol, "suboptimality tolerance");
  profile->add_option("--seed0", pseed0, "first seed");
  profile->add_option("--n", spec.n);
  profile->add_option("--m", spec.m);
  profile->add_option("--n1", spec.n1);
  profile->add_option("--n2", spec.n2);
  profile->add_option("--lambda", spec.lambda);
  profile->add_option("--max-iters", spec.max_iters);
  profile->add_option("--max-time", spec.max_time_s);
  profile->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      spec.family = parse_family(family_str);
      spec.algorithms = parse_algos(algos_str);
      return proxacc::run_experiment(spec, out_dir);
    }
    spec.family = parse_family(pfamily_str);
    std::vector<proxacc::ExperimentSpec> specs;
    for (int i = 0; i < n_instances; ++i) {
      proxacc::ExperimentSpec s = spec;
      s.seed = pseed0 + static_cast<std::uint64_t>(i);
      specs.push_back(s);
    }
    const proxacc::ProfileTable table =
        proxacc::performance_profile(specs, ptol);
    return proxacc::write_profile(table, out_dir);
  } catch (const proxacc::NumericalFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
