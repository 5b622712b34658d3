#pragma once

#include "proxacc/problem.hpp"

namespace proxacc {

/// g(x) = ||x||_1 on R^n, identifying fixed-support subspaces.
class L1Norm final : public Regularizer {
 public:
  double value(const Point& x) const override;
  ProxResult prox(const Point& y, double gamma_lambda) const override;
  Point rgrad(const ManifoldDescriptor& m, const Point& x,
              const SvdTriple* svd) const override;
  Point rhess(const ManifoldDescriptor& m, const Point& x, const Point& eta,
              const SvdTriple* svd) const override;
  double qualification_margin(const ManifoldDescriptor& m, const Point& x,
                              const Point& grad_f,
                              double lambda) const override;
};

/// g(x) = ||x||_* on R^{m x n}, identifying fixed-rank manifolds.
class NuclearNorm final : public Regularizer {
 public:
  double value(const Point& x) const override;
  ProxResult prox(const Point& y, double gamma_lambda) const override;
  Point rgrad(const ManifoldDescriptor& m, const Point& x,
              const SvdTriple* svd) const override;
  Point rhess(const ManifoldDescriptor& m, const Point& x, const Point& eta,
              const SvdTriple* svd) const override;
  double qualification_margin(const ManifoldDescriptor& m, const Point& x,
                              const Point& grad_f,
                              double lambda) const override;
};

/// g(x) = |x1^2 - x2| on R^2, identifying the parabola {x2 = x1^2}.
/// Prox requires gamma_lambda in (0, 1/2).
class AbsParabola final : public Regularizer {
 public:
  double value(const Point& x) const override;
  ProxResult prox(const Point& y, double gamma_lambda) const override;
  Point rgrad(const ManifoldDescriptor& m, const Point& x,
              const SvdTriple* svd) const override;
  Point rhess(const ManifoldDescriptor& m, const Point& x, const Point& eta,
              const SvdTriple* svd) const override;
  double qualification_margin(const ManifoldDescriptor& m, const Point& x,
                              const Point& grad_f,
                              double lambda) const override;
};

/// Structured-criticality diagnostic: prox fixed-point residual at x plus the
/// regularizer-specific strict-qualification margin.
QualificationReport qualification_report(const CompositeProblem& problem,
                                         const Point& x,
                                         const ManifoldDescriptor& manifold,
                                         double gamma, OracleCounters& c);

}  // namespace proxacc
