#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "proxacc/manifold.hpp"

namespace proxacc {

/// Oracle call counters for one solver run. Monotone nondecreasing.
struct OracleCounters {
  long n_f_evals = 0;
  long n_g_evals = 0;
  long n_grad_f = 0;
  long n_prox = 0;
  long n_rgrad = 0;
  long n_hess_vec = 0;
  long n_manacc_steps = 0;
  long n_proxgrad_steps = 0;

  bool dominates(const OracleCounters& o) const {
    return n_f_evals >= o.n_f_evals && n_g_evals >= o.n_g_evals &&
           n_grad_f >= o.n_grad_f && n_prox >= o.n_prox &&
           n_rgrad >= o.n_rgrad && n_hess_vec >= o.n_hess_vec &&
           n_manacc_steps >= o.n_manacc_steps &&
           n_proxgrad_steps >= o.n_proxgrad_steps;
  }
};

/// Smooth oracle f: value, gradient, Hessian-vector product.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;
  virtual double value(const Point& x) const = 0;
  virtual Point gradient(const Point& x) const = 0;
  virtual Point hessvec(const Point& x, const Point& v) const = 0;
  virtual double lipschitz_upper_bound() const = 0;
  virtual int rows() const = 0;
  virtual int cols() const = 0;
};

/// Result of a structure-revealing prox evaluation.
struct ProxResult {
  Point point;
  ManifoldDescriptor manifold;
  double value_g = 0.0;  // unweighted g at point
  std::optional<SvdTriple> svd;
};

struct QualificationReport {
  double fixed_point_residual = 0.0;
  double margin = 0.0;
  ManifoldDescriptor manifold;
};

/// Nonsmooth oracle g, unweighted; the caller supplies gamma * lambda to
/// prox and scales Riemannian derivatives by lambda.
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual double value(const Point& x) const = 0;
  virtual ProxResult prox(const Point& y, double gamma_lambda) const = 0;
  virtual Point rgrad(const ManifoldDescriptor& m, const Point& x,
                      const SvdTriple* svd = nullptr) const = 0;
  virtual Point rhess(const ManifoldDescriptor& m, const Point& x,
                      const Point& eta,
                      const SvdTriple* svd = nullptr) const = 0;
  /// Strict-qualification slack of -grad_f relative to lambda * ri(dg(x)).
  virtual double qualification_margin(const ManifoldDescriptor& m,
                                      const Point& x, const Point& grad_f,
                                      double lambda) const = 0;
};

struct CompositeProblem {
  std::shared_ptr<SmoothOracle> smooth;
  std::shared_ptr<Regularizer> nonsmooth;
  double lambda = 1.0;

  double eval_f(const Point& x, OracleCounters& c) const {
    ++c.n_f_evals;
    return smooth->value(x);
  }
  double eval_g(const Point& x, OracleCounters& c) const {
    ++c.n_g_evals;
    return lambda * nonsmooth->value(x);
  }
  double eval_F(const Point& x, OracleCounters& c) const {
    require(all_finite(x), "eval_F: non-finite point");
    require(x.rows() == smooth->rows() && x.cols() == smooth->cols(),
            "eval_F: shape mismatch");
    return eval_f(x, c) + eval_g(x, c);
  }
  Point grad_f(const Point& x, OracleCounters& c) const {
    ++c.n_grad_f;
    return smooth->gradient(x);
  }
  Point hessvec_f(const Point& x, const Point& v, OracleCounters& c) const {
    return smooth->hessvec(x, v);
  }
  ProxResult prox_g(const Point& y, double gamma, OracleCounters& c) const {
    ++c.n_prox;
    return nonsmooth->prox(y, gamma * lambda);
  }
};

/// Per-iteration trace entry. The CSV schema covers the reporting columns;
/// the remaining fields are in-memory diagnostics.
struct IterationRecord {
  int iter = 0;
  double time_s = 0.0;
  double f_plus_g = 0.0;
  std::optional<double> suboptimality;
  int manifold_dim = 0;
  OracleCounters counters;

  ManifoldDescriptor manifold;
  double gamma_used = 0.0;
  double lipschitz_est = 0.0;
  double step_norm = 0.0;     // ||x_{k} - y_{k-1}||
  double f_plus_g_at_y = 0.0;  // F(y_{k-1}), the base of this step
  bool unit_step_accepted = false;
  bool manacc_progressed = false;
};

/// Appends a record; enforces nondecreasing time and counters.
class TraceAccumulator {
 public:
  const IterationRecord& append(IterationRecord rec);
  const std::vector<IterationRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<IterationRecord> records_;
};

/// CSV with header iter,time_s,F,subopt,manifold_dim,n_proxgrad,n_manacc,
/// n_hessvec,n_f,n_g; floats printed with 17 significant digits.
void write_trace_csv(std::ostream& os,
                     const std::vector<IterationRecord>& trace);

}  // namespace proxacc
