// Compares the OpenMP oracle kernels against their serial references on a
// paper-sized logistic instance and a batch of matrix-regression evaluations.

#include <chrono>
#include <iostream>
#include <random>

#include "proxacc/smooth.hpp"

using namespace proxacc;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;

  const int m = 400, n = 4000;
  Eigen::MatrixXd A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) y(i) = normal(rng) > 0 ? 1.0 : -1.0;
  Point x(n, 1), v(n, 1);
  for (int j = 0; j < n; ++j) {
    x(j, 0) = normal(rng);
    v(j, 0) = normal(rng);
  }
  LogisticOracle lg(A, y);

  const int reps = 50;
  double sink = 0.0;
  const double t_val_omp = time_ms([&] { sink += lg.value(x); }, reps);
  const double t_val_ser =
      time_ms([&] { sink += serial::logistic_value(A, y, x); }, reps);
  const double t_grad_omp = time_ms([&] { sink += lg.gradient(x).sum(); }, reps);
  const double t_grad_ser = time_ms(
      [&] { sink += serial::logistic_gradient(A, y, x).sum(); }, reps);
  const double t_hv_omp =
      time_ms([&] { sink += lg.hessvec(x, v).sum(); }, reps);
  const double t_hv_ser = time_ms(
      [&] { sink += serial::logistic_hessvec(A, y, x, v).sum(); }, reps);

  std::cout << "logistic " << m << "x" << n << " (ms/call, omp vs serial)\n";
  std::cout << "  value:   " << t_val_omp << "  " << t_val_ser << '\n';
  std::cout << "  grad:    " << t_grad_omp << "  " << t_grad_ser << '\n';
  std::cout << "  hessvec: " << t_hv_omp << "  " << t_hv_ser << '\n';

  const int n1 = 40, n2 = 48, mm = 600;
  std::vector<Eigen::MatrixXd> sensing(mm);
  for (auto& Ai : sensing) {
    Ai.resize(n1, n2);
    for (int p = 0; p < n1; ++p)
      for (int q = 0; q < n2; ++q) Ai(p, q) = normal(rng);
  }
  Eigen::VectorXd ty(mm);
  for (int i = 0; i < mm; ++i) ty(i) = normal(rng);
  Point X(n1, n2);
  for (int p = 0; p < n1; ++p)
    for (int q = 0; q < n2; ++q) X(p, q) = normal(rng);
  MatrixRegressionOracle mr(sensing, ty);

  const double t_mg_omp = time_ms([&] { sink += mr.gradient(X).sum(); }, reps);
  const double t_mg_ser = time_ms(
      [&] { sink += serial::matreg_gradient(sensing, ty, X).sum(); }, reps);
  std::cout << "matreg " << mm << " sensing " << n1 << "x" << n2
            << " (ms/call, omp vs serial)\n";
  std::cout << "  grad:    " << t_mg_omp << "  " << t_mg_ser << '\n';

  // keep the optimizer honest
  std::cerr << "checksum " << sink << '\n';
  return 0;
}
