#pragma once

#include "proxacc/problem.hpp"

namespace proxacc {

/// f(x) = (1/m) sum_i log(1 + exp(-y_i <A_i, x>)), labels y_i in {-1, +1}.
/// Inner loops over samples/features are OpenMP-parallel with a fixed
/// reduction order, so results are identical across thread counts.
class LogisticOracle final : public SmoothOracle {
 public:
  LogisticOracle(Eigen::MatrixXd A, Eigen::VectorXd y);

  double value(const Point& x) const override;
  Point gradient(const Point& x) const override;
  Point hessvec(const Point& x, const Point& v) const override;
  double lipschitz_upper_bound() const override;
  int rows() const override { return static_cast<int>(A_.cols()); }
  int cols() const override { return 1; }

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& labels() const { return y_; }

 private:
  Eigen::MatrixXd A_;  // m x n
  Eigen::VectorXd y_;  // m, entries exactly +-1
  mutable double lip_cache_ = -1.0;
};

/// f(x) = 1/2 sum_i (<A_i, x> - y_i)^2 over n1 x n2 matrices x.
class MatrixRegressionOracle final : public SmoothOracle {
 public:
  MatrixRegressionOracle(std::vector<Eigen::MatrixXd> sensing,
                         Eigen::VectorXd y);

  double value(const Point& x) const override;
  Point gradient(const Point& x) const override;
  Point hessvec(const Point& x, const Point& v) const override;
  double lipschitz_upper_bound() const override;
  int rows() const override { return n1_; }
  int cols() const override { return n2_; }

  const std::vector<Eigen::MatrixXd>& sensing() const { return sensing_; }
  const Eigen::VectorXd& targets() const { return y_; }

 private:
  std::vector<Eigen::MatrixXd> sensing_;
  Eigen::VectorXd y_;
  int n1_ = 0, n2_ = 0;
  mutable double lip_cache_ = -1.0;
};

/// f(x) = 2 x1^2 + x2^2 on R^2.
class Quad2DOracle final : public SmoothOracle {
 public:
  double value(const Point& x) const override {
    return 2.0 * x(0, 0) * x(0, 0) + x(1, 0) * x(1, 0);
  }
  Point gradient(const Point& x) const override {
    Point g(2, 1);
    g << 4.0 * x(0, 0), 2.0 * x(1, 0);
    return g;
  }
  Point hessvec(const Point&, const Point& v) const override {
    Point h(2, 1);
    h << 4.0 * v(0, 0), 2.0 * v(1, 0);
    return h;
  }
  double lipschitz_upper_bound() const override { return 4.0; }
  int rows() const override { return 2; }
  int cols() const override { return 1; }
};

/// f(x) = 1/2 ||x - a||^2; handy for prox-step and Newton unit tests.
class QuadraticDistanceOracle final : public SmoothOracle {
 public:
  explicit QuadraticDistanceOracle(Point a) : a_(std::move(a)) {}
  double value(const Point& x) const override {
    return 0.5 * (x - a_).squaredNorm();
  }
  Point gradient(const Point& x) const override { return x - a_; }
  Point hessvec(const Point&, const Point& v) const override { return v; }
  double lipschitz_upper_bound() const override { return 1.0; }
  int rows() const override { return static_cast<int>(a_.rows()); }
  int cols() const override { return static_cast<int>(a_.cols()); }

 private:
  Point a_;
};

/// Numerically stable log(1 + exp(z)).
double softplus(double z);
/// Numerically stable logistic sigmoid.
double sigmoid(double z);

/// Serial Eigen-only reference implementations of the data-parallel kernels,
/// kept for testing and for the kernel benchmark.
namespace serial {
double logistic_value(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const Point& x);
Point logistic_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const Point& x);
Point logistic_hessvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                       const Point& x, const Point& v);
double matreg_value(const std::vector<Eigen::MatrixXd>& sensing,
                    const Eigen::VectorXd& y, const Point& x);
Point matreg_gradient(const std::vector<Eigen::MatrixXd>& sensing,
                      const Eigen::VectorXd& y, const Point& x);
Point matreg_hessvec(const std::vector<Eigen::MatrixXd>& sensing,
                     const Point& v);
}  // namespace serial

}  // namespace proxacc
