#pragma once

#include "mfbm/existence.hpp"
#include "mfbm/params.hpp"

#include <Eigen/Dense>

namespace mfbm {

/**
 * Coefficient matrix A of the spectral representation, characterized by
 * (A A*)_ij = sigma_i sigma_j / (2 pi) Gamma(H_i + H_j + 1) tau_ij(1).
 * A is unique only up to right multiplication by a unitary matrix.
 */
struct SpectralMatrixA {
  Eigen::MatrixXcd entries;
  double cholesky_shift = 0.0;  ///< diagonal shift added before factorization (0 if none)
};

/// Moving-average matrices of the representation
///   X_i(t) = sum_j integral M+_ij ((t-x)_+^{H_i-1/2} - (-x)_+^{H_i-1/2})
///                       + M-_ij ((t-x)_-^{H_i-1/2} - (-x)_-^{H_i-1/2}) W_j(dx).
struct MAMatrices {
  Eigen::MatrixXd m_plus;
  Eigen::MatrixXd m_minus;
};

/// (sigma_i sigma_j / 2 pi) Gamma(H_i + H_j + 1) tau_ij(1), the Gram target of A.
Eigen::MatrixXcd spectral_gram_target(const MfbmParams& params);

/// Lower Cholesky factor of the Gram target. Throws ExistenceError when the
/// parameters are not admissible. A semidefinite target is shifted by
/// psd_tol * max |target| before factorization and the shift is recorded.
SpectralMatrixA a_from_params(const MfbmParams& params, double psd_tol = kDefaultPsdTol);

/// Closed-form A for p = 2. When the coherence is 0 the result is the diagonal
/// square root of the target. Throws ExistenceError when C_12 > 1.
SpectralMatrixA a_explicit_p2(const MfbmParams& params);

/// Inverse of a_from_ma. Requires every |H_i - 1/2| >= 1e-12 (the map is singular at 1/2).
/// Real A gives M+ = M-.
MAMatrices ma_from_a(const SpectralMatrixA& A, const Eigen::VectorXd& H);

/// A whose Gram matrix equals the covariance-level target of params_from_ma(mpm, H).
SpectralMatrixA a_from_ma(const MAMatrices& mpm, const Eigen::VectorXd& H);

/// sigma, rho, eta (rho~, eta~ for UnitSum pairs) of the process with the given
/// moving-average matrices. Throws std::domain_error on a component with zero variance.
MfbmParams params_from_ma(const MAMatrices& mpm, const Eigen::VectorXd& H, double one_tol = kDefaultOneTol);

/// Fills eta so that the process is causal (M- = 0) or well-balanced (M+ = M-),
/// keeping H, sigma and rho. Causal UnitSum pairs with H_i = 1/2 throw std::domain_error.
MfbmParams special_case_eta(const MfbmParams& params_rho_only, SpecialCase special_case);

}  // namespace mfbm
