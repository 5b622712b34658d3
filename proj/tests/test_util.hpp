#pragma once

#include <functional>
#include <random>

#include "proxacc/manifold.hpp"

namespace proxacc::testutil {

inline Eigen::MatrixXd random_matrix(int rows, int cols,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = normal(rng);
  return A;
}

/// Random rank-r matrix with a well-separated spectrum.
inline Point random_fixed_rank_point(int m, int n, int r,
                                     std::mt19937_64& rng) {
  const Eigen::MatrixXd A = random_matrix(m, r, rng);
  const Eigen::MatrixXd B = random_matrix(n, r, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qa(A), qb(B);
  const Eigen::MatrixXd U =
      qa.householderQ() * Eigen::MatrixXd::Identity(m, r);
  const Eigen::MatrixXd V =
      qb.householderQ() * Eigen::MatrixXd::Identity(n, r);
  Eigen::VectorXd s(r);
  for (int i = 0; i < r; ++i) s(i) = 1.0 + 2.0 * (r - i);  // separated
  return U * s.asDiagonal() * V.transpose();
}

/// Central finite-difference derivative of a scalar curve at 0.
inline double fd_derivative(const std::function<double(double)>& phi,
                            double h = 1e-5) {
  return (phi(h) - phi(-h)) / (2.0 * h);
}

/// 5-point finite-difference second derivative at 0.
inline double fd_second_derivative(const std::function<double(double)>& phi,
                                   double h = 1e-3) {
  return (-phi(2 * h) + 16 * phi(h) - 30 * phi(0) + 16 * phi(-h) -
          phi(-2 * h)) /
         (12.0 * h * h);
}

/// Least-squares slope of log|remainder| vs log t; the Taylor-test exponent.
inline double remainder_slope(const std::function<double(double)>& remainder,
                              const std::vector<double>& ts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double t : ts) {
    const double r = std::abs(remainder(t));
    if (r < 1e-300) continue;
    const double x = std::log(t), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace proxacc::testutil
