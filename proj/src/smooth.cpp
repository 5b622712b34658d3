#include "proxacc/smooth.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace proxacc {

double softplus(double z) {
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -------------------------------------------------------- LogisticOracle

LogisticOracle::LogisticOracle(Eigen::MatrixXd A, Eigen::VectorXd y)
    : A_(std::move(A)), y_(std::move(y)) {
  require(A_.rows() == y_.size(), "logistic: A/y size mismatch");
  for (Eigen::Index i = 0; i < y_.size(); ++i)
    require(y_(i) == 1.0 || y_(i) == -1.0, "logistic: labels must be +-1");
}

namespace {

// Margins z_i = y_i <A_i, x>; one output element per thread iteration, so
// the result does not depend on the thread count.
Eigen::VectorXd logistic_margins(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& y, const Point& x) {
  const Eigen::Index m = A.rows();
  Eigen::VectorXd z(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) z(i) = y(i) * A.row(i).dot(x.col(0));
  return z;
}

}  // namespace

double LogisticOracle::value(const Point& x) const {
  const Eigen::VectorXd z = logistic_margins(A_, y_, x);
  const Eigen::Index m = z.size();
  Eigen::VectorXd terms(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) terms(i) = softplus(-z(i));
  return terms.sum() / static_cast<double>(m);  // serial sum: deterministic
}

Point LogisticOracle::gradient(const Point& x) const {
  const Eigen::Index m = A_.rows(), n = A_.cols();
  const Eigen::VectorXd z = logistic_margins(A_, y_, x);
  Eigen::VectorXd w(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i)
    w(i) = -y_(i) * sigmoid(-z(i)) / static_cast<double>(m);
  Point g(n, 1);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) g(j, 0) = A_.col(j).dot(w);
  return g;
}

Point LogisticOracle::hessvec(const Point& x, const Point& v) const {
  const Eigen::Index m = A_.rows(), n = A_.cols();
  const Eigen::VectorXd z = logistic_margins(A_, y_, x);
  Eigen::VectorXd w(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = sigmoid(z(i));
    w(i) = s * (1.0 - s) * A_.row(i).dot(v.col(0)) / static_cast<double>(m);
  }
  Point h(n, 1);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) h(j, 0) = A_.col(j).dot(w);
  return h;
}

double LogisticOracle::lipschitz_upper_bound() const {
  if (lip_cache_ < 0.0) {
    const double smax =
        Eigen::JacobiSVD<Eigen::MatrixXd>(A_).singularValues()(0);
    lip_cache_ = smax * smax / (4.0 * static_cast<double>(A_.rows()));
  }
  return lip_cache_;
}

// ------------------------------------------------- MatrixRegressionOracle

MatrixRegressionOracle::MatrixRegressionOracle(
    std::vector<Eigen::MatrixXd> sensing, Eigen::VectorXd y)
    : sensing_(std::move(sensing)), y_(std::move(y)) {
  require(!sensing_.empty(), "matreg: no sensing matrices");
  require(static_cast<Eigen::Index>(sensing_.size()) == y_.size(),
          "matreg: sensing/y size mismatch");
  n1_ = static_cast<int>(sensing_[0].rows());
  n2_ = static_cast<int>(sensing_[0].cols());
  for (const auto& Ai : sensing_)
    require(Ai.rows() == n1_ && Ai.cols() == n2_,
            "matreg: inconsistent sensing shapes");
}

namespace {

Eigen::VectorXd matreg_residuals(const std::vector<Eigen::MatrixXd>& sensing,
                                 const Eigen::VectorXd& y, const Point& x) {
  const Eigen::Index m = y.size();
  Eigen::VectorXd r(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i)
    r(i) = frob_inner(sensing[i], x) - y(i);
  return r;
}

// sum_i w_i A_i, accumulated entrywise so each output entry has a fixed
// summation order.
Point weighted_sensing_sum(const std::vector<Eigen::MatrixXd>& sensing,
                           const Eigen::VectorXd& w, int n1, int n2) {
  Point out(n1, n2);
  const Eigen::Index total = static_cast<Eigen::Index>(n1) * n2;
#pragma omp parallel for schedule(static)
  for (Eigen::Index e = 0; e < total; ++e) {
    const Eigen::Index p = e % n1, q = e / n1;
    double acc = 0.0;
    for (size_t i = 0; i < sensing.size(); ++i)
      acc += w(static_cast<Eigen::Index>(i)) * sensing[i](p, q);
    out(p, q) = acc;
  }
  return out;
}

}  // namespace

double MatrixRegressionOracle::value(const Point& x) const {
  return 0.5 * matreg_residuals(sensing_, y_, x).squaredNorm();
}

Point MatrixRegressionOracle::gradient(const Point& x) const {
  const Eigen::VectorXd r = matreg_residuals(sensing_, y_, x);
  return weighted_sensing_sum(sensing_, r, n1_, n2_);
}

Point MatrixRegressionOracle::hessvec(const Point&, const Point& v) const {
  const Eigen::Index m = y_.size();
  Eigen::VectorXd w(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) w(i) = frob_inner(sensing_[i], v);
  return weighted_sensing_sum(sensing_, w, n1_, n2_);
}

double MatrixRegressionOracle::lipschitz_upper_bound() const {
  if (lip_cache_ < 0.0) {
    // Stacked vectorized sensing operator, m x (n1*n2).
    Eigen::MatrixXd S(y_.size(), n1_ * n2_);
    for (Eigen::Index i = 0; i < y_.size(); ++i)
      S.row(i) = Eigen::Map<const Eigen::VectorXd>(sensing_[i].data(),
                                                   n1_ * n2_);
    const double smax = Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
    lip_cache_ = smax * smax;
  }
  return lip_cache_;
}

// ------------------------------------------------------- serial reference

namespace serial {

double logistic_value(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const Point& x) {
  const Eigen::VectorXd z = y.cwiseProduct(A * x.col(0));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) acc += softplus(-z(i));
  return acc / static_cast<double>(z.size());
}

Point logistic_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const Point& x) {
  const Eigen::VectorXd z = y.cwiseProduct(A * x.col(0));
  Eigen::VectorXd w(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    w(i) = -y(i) * sigmoid(-z(i)) / static_cast<double>(z.size());
  return A.transpose() * w;
}

Point logistic_hessvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                       const Point& x, const Point& v) {
  const Eigen::VectorXd z = y.cwiseProduct(A * x.col(0));
  const Eigen::VectorXd Av = A * v.col(0);
  Eigen::VectorXd w(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = sigmoid(z(i));
    w(i) = s * (1.0 - s) * Av(i) / static_cast<double>(z.size());
  }
  return A.transpose() * w;
}

double matreg_value(const std::vector<Eigen::MatrixXd>& sensing,
                    const Eigen::VectorXd& y, const Point& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = frob_inner(sensing[i], x) - y(i);
    acc += r * r;
  }
  return 0.5 * acc;
}

Point matreg_gradient(const std::vector<Eigen::MatrixXd>& sensing,
                      const Eigen::VectorXd& y, const Point& x) {
  Point out = Point::Zero(sensing[0].rows(), sensing[0].cols());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    out += (frob_inner(sensing[i], x) - y(i)) * sensing[i];
  return out;
}

Point matreg_hessvec(const std::vector<Eigen::MatrixXd>& sensing,
                     const Point& v) {
  Point out = Point::Zero(sensing[0].rows(), sensing[0].cols());
  for (const auto& Ai : sensing) out += frob_inner(Ai, v) * Ai;
  return out;
}

}  // namespace serial

}  // namespace proxacc
