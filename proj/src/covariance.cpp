#include "mfbm/covariance.hpp"

#include "mfbm/special.hpp"

#include <cmath>
#include <stdexcept>

namespace mfbm {

double w(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double h) {
  if (h == 0.0) return 0.0;
  const double rho = params.rho(i, j);
  const double eta = params.eta(i, j);
  if (pair_kind(params, i, j) == PairKind::UnitSum) return rho * std::abs(h) + eta * xlogabsx(h);
  const double alpha = params.H(i) + params.H(j);
  return (rho - eta * sign(h)) * std::pow(std::abs(h), alpha);
}

double mfbm_cov(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double s, double t) {
  // Both branches reduce to (sigma_i sigma_j / 2)[w(-s) + w(t) - w(t - s)].
  const double scale = 0.5 * params.sigma(i) * params.sigma(j);
  return scale * (w(params, i, j, -s) + w(params, i, j, t) - w(params, i, j, t - s));
}

double increment_cov(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double h, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("increment_cov: delta must be positive");
  const double scale = 0.5 * params.sigma(i) * params.sigma(j);
  if (std::abs(h) <= delta)
    return scale * (w(params, i, j, h - delta) - 2.0 * w(params, i, j, h) + w(params, i, j, h + delta));
  // h - delta, h and h + delta share a sign: factor out the power of |h| so the second
  // difference does not cancel terms much larger than the result.
  const double x = delta / std::abs(h);
  if (pair_kind(params, i, j) == PairKind::UnitSum) {
    const double b = (1.0 - x) * std::log1p(-x) + (1.0 + x) * std::log1p(x);
    return scale * params.eta(i, j) * h * b;
  }
  const double alpha = params.H(i) + params.H(j);
  const double b = std::expm1(alpha * std::log1p(-x)) + std::expm1(alpha * std::log1p(x));
  return scale * (params.rho(i, j) - params.eta(i, j) * sign(h)) * std::pow(std::abs(h), alpha) * b;
}

LagBlock lag_block(const MfbmParams& params, double h, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lag_block: delta must be positive");
  const Eigen::Index p = params.p();
  LagBlock out{h, delta, Eigen::MatrixXd(p, p)};
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = 0; k < p; ++k) out.block(j, k) = increment_cov(params, j, k, h, delta);
  return out;
}

double asymptotic_kappa(const MfbmParams& params, Eigen::Index i, Eigen::Index j, int sign_h) {
  if (sign_h != 1 && sign_h != -1) throw std::invalid_argument("asymptotic_kappa: sign_h must be +1 or -1");
  // The 1/2 comes from gamma = (sigma_i sigma_j / 2) |h|^alpha (rho - eta sign h) B(h)
  // with B(h) ~ alpha (alpha - 1) delta^2 h^-2.
  if (pair_kind(params, i, j) == PairKind::UnitSum) return 0.5 * params.eta(i, j) * sign_h;
  const double alpha = params.H(i) + params.H(j);
  return 0.5 * (params.rho(i, j) - params.eta(i, j) * sign_h) * alpha * (alpha - 1.0);
}

bool is_time_reversible(const MfbmParams& params) {
  const Eigen::Index p = params.p();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j && params.eta(i, j) != 0.0) return false;
  return true;
}

CovMatrixFn::CovMatrixFn(MfbmParams params) : params_(std::move(params)) { require_valid(params_); }

Eigen::MatrixXd CovMatrixFn::sigma(double s, double t) const {
  const Eigen::Index p = params_.p();
  Eigen::MatrixXd out(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) out(i, j) = mfbm_cov(params_, i, j, s, t);
  return out;
}

}  // namespace mfbm
