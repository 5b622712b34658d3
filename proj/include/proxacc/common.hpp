#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace proxacc {

// Ambient representation: vectors are stored as n-by-1 matrices so that
// vector and matrix problems share one code path.
using Point = Eigen::MatrixXd;

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankCollapse : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

struct DegenerateSpectrum : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

struct IllConditionedCurvature : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

inline bool all_finite(const Point& x) { return x.allFinite(); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

inline double frob_inner(const Point& a, const Point& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace proxacc
