#include "proxacc/svd_diff.hpp"

#include <cmath>

namespace proxacc {

Eigen::MatrixXd coupling_F(const Eigen::VectorXd& sigma) {
  const int r = static_cast<int>(sigma.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (sigma(i) != sigma(j))
        F(i, j) = 1.0 / (sigma(j) * sigma(j) - sigma(i) * sigma(i));
  return F;
}

Eigen::MatrixXd coupling_Ftilde(const Eigen::VectorXd& sigma) {
  const int r = static_cast<int>(sigma.size());
  Eigen::MatrixXd Ft = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (sigma(i) != sigma(j)) Ft(i, j) = 1.0 / (sigma(j) + sigma(i));
  return Ft;
}

void check_spectrum_separated(const Eigen::VectorXd& sigma,
                              double gap_rel_tol) {
  const int r = static_cast<int>(sigma.size());
  if (r == 0) return;
  const double smax = sigma.maxCoeff();
  if (sigma.minCoeff() <= 0.0)
    throw DegenerateSpectrum("nonpositive singular value");
  for (int i = 0; i + 1 < r; ++i)
    if (sigma(i) - sigma(i + 1) < gap_rel_tol * smax)
      throw DegenerateSpectrum("singular values too close");
}

SvdDerivative svd_factor_derivatives(const SvdTriple& x,
                                     const FixedRankTangent& eta,
                                     double gap_rel_tol) {
  check_spectrum_separated(x.sigma, gap_rel_tol);
  const Eigen::MatrixXd F = coupling_F(x.sigma);
  const Eigen::VectorXd sinv = x.sigma.cwiseInverse();
  const Eigen::MatrixXd S = x.sigma.asDiagonal();

  SvdDerivative d;
  d.dSigma = eta.M.diagonal();
  d.dU = x.U * (F.cwiseProduct(eta.M * S + S * eta.M.transpose())) +
         eta.Up * sinv.asDiagonal();
  d.dV = x.V * (F.cwiseProduct(S * eta.M + eta.M.transpose() * S)) +
         eta.Vp * sinv.asDiagonal();
  return d;
}

Point nuclear_rgrad(const SvdTriple& x) { return x.U * x.V.transpose(); }

NuclearDerivatives nuclear_rgrad_rhess(const SvdTriple& x,
                                       const FixedRankTangent& eta,
                                       double gap_rel_tol) {
  check_spectrum_separated(x.sigma, gap_rel_tol);
  if (x.sigma.minCoeff() <= 1e-12)
    throw IllConditionedCurvature("nuclear Hessian: tiny singular value");
  const Eigen::MatrixXd Ft = coupling_Ftilde(x.sigma);
  const Eigen::VectorXd sinv = x.sigma.cwiseInverse();

  NuclearDerivatives out;
  out.grad = nuclear_rgrad(x);
  out.hess_eta =
      x.U * (Ft.cwiseProduct(eta.M - eta.M.transpose())) * x.V.transpose() +
      eta.Up * sinv.asDiagonal() * x.V.transpose() +
      x.U * sinv.asDiagonal() * eta.Vp.transpose();
  return out;
}

}  // namespace proxacc
