#pragma once

#include "proxacc/manifold.hpp"

namespace proxacc {

/// Derivatives of the thin-SVD factors of a curve c(t) on the fixed-rank
/// manifold with c(0) = x and c'(0) = eta, evaluated at t = 0.
struct SvdDerivative {
  Eigen::MatrixXd dU;      // m x r
  Eigen::VectorXd dSigma;  // r
  Eigen::MatrixXd dV;      // n x r
};

/// F_ij = 1/(sigma_j^2 - sigma_i^2) off-diagonal, 0 on the diagonal.
/// Antisymmetric. Requires a well-separated spectrum.
Eigen::MatrixXd coupling_F(const Eigen::VectorXd& sigma);

/// Ftilde_ij = 1/(sigma_j + sigma_i) off-diagonal, 0 on the diagonal.
Eigen::MatrixXd coupling_Ftilde(const Eigen::VectorXd& sigma);

/// Throws DegenerateSpectrum when two singular values are closer than
/// gap_rel_tol * sigma_max.
void check_spectrum_separated(const Eigen::VectorXd& sigma,
                              double gap_rel_tol = 1e-8);

SvdDerivative svd_factor_derivatives(const SvdTriple& x,
                                     const FixedRankTangent& eta,
                                     double gap_rel_tol = 1e-8);

/// Riemannian gradient U V^T and Hessian-vector product of the nuclear norm
/// restricted to the fixed-rank manifold.
struct NuclearDerivatives {
  Point grad;
  Point hess_eta;
};

NuclearDerivatives nuclear_rgrad_rhess(const SvdTriple& x,
                                       const FixedRankTangent& eta,
                                       double gap_rel_tol = 1e-8);

Point nuclear_rgrad(const SvdTriple& x);

}  // namespace proxacc
