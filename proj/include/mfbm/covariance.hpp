#pragma once

#include "mfbm/params.hpp"

#include <Eigen/Dense>

namespace mfbm {

// Closed-form second-order structure of a mfBm and of its increments.
// Component indices are 0-based. None of these functions checks admissibility;
// they evaluate the formulas for any structurally valid parameter set.

/// w_ij(h): (rho - eta sign h)|h|^(H_i+H_j) for GenericSum pairs,
/// rho~|h| + eta~ h log|h| for UnitSum pairs; w(0) = 0.
double w(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double h);

/// E X_i(s) X_j(t).
double mfbm_cov(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double s, double t);

/// gamma_ij(h, delta) = E[Delta X_i(t) Delta X_j(t + h)] for increments of size delta.
/// Positive h means component j is observed later. Throws for delta <= 0.
double increment_cov(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double h, double delta);

/// G(h) with entries gamma_jk(h, delta); G(-h) = G(h)^T.
struct LagBlock {
  double h = 0.0;
  double delta = 1.0;
  Eigen::MatrixXd block;
};

LagBlock lag_block(const MfbmParams& params, double h, double delta);

/// Constant in gamma_ij(h, delta) ~ sigma_i sigma_j delta^2 |h|^(H_i+H_j-2) kappa_ij(sign h)
/// as |h| -> infinity. sign_h must be +1 or -1.
double asymptotic_kappa(const MfbmParams& params, Eigen::Index i, Eigen::Index j, int sign_h);

/// True iff every stored off-diagonal eta (or eta~) is exactly zero.
bool is_time_reversible(const MfbmParams& params);

/// Evaluator for the covariance matrix function Sigma(s, t) = (E X_i(s) X_j(t)).
class CovMatrixFn {
 public:
  /// Throws std::invalid_argument on structurally invalid params.
  explicit CovMatrixFn(MfbmParams params);

  const MfbmParams& params() const { return params_; }
  Eigen::MatrixXd sigma(double s, double t) const;
  LagBlock increments(double h, double delta = 1.0) const { return lag_block(params_, h, delta); }

 private:
  MfbmParams params_;
};

}  // namespace mfbm
