#include "mfbm/spectral.hpp"

#include "mfbm/special.hpp"

#include <cmath>
#include <stdexcept>

namespace mfbm {

std::complex<double> tau(const MfbmParams& params, Eigen::Index i, Eigen::Index j, int sign_omega) {
  if (sign_omega != 1 && sign_omega != -1) throw std::invalid_argument("tau: sign_omega must be +1 or -1");
  const double rho = params.rho(i, j);
  const double eta = params.eta(i, j);
  if (pair_kind(params, i, j) == PairKind::UnitSum) return {rho, -0.5 * kPi * eta * sign_omega};
  const double half = 0.5 * kPi * (params.H(i) + params.H(j));
  return {rho * std::sin(half), -eta * sign_omega * std::cos(half)};
}

double tau_modulus_sq(const MfbmParams& params, Eigen::Index i, Eigen::Index j) {
  return std::norm(tau(params, i, j, 1));
}

std::complex<double> cross_spectral_density(const MfbmParams& params, Eigen::Index i, Eigen::Index j,
                                            double omega, double delta) {
  if (omega == 0.0) throw std::domain_error("cross_spectral_density: omega must be nonzero");
  if (!(delta > 0.0)) throw std::invalid_argument("cross_spectral_density: delta must be positive");
  const double alpha = params.H(i) + params.H(j);
  const double amplitude = params.sigma(i) * params.sigma(j) / kPi * gamma_fn(alpha + 1.0) *
                           (1.0 - std::cos(omega * delta)) / std::pow(std::abs(omega), alpha + 1.0);
  return amplitude * tau(params, i, j, omega > 0.0 ? 1 : -1);
}

double low_freq_modulus(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double omega, double delta) {
  if (omega == 0.0) throw std::domain_error("low_freq_modulus: omega must be nonzero");
  const double alpha = params.H(i) + params.H(j);
  return params.sigma(i) * params.sigma(j) / (2.0 * kPi) * gamma_fn(alpha + 1.0) * delta * delta *
         std::sqrt(tau_modulus_sq(params, i, j)) / std::pow(std::abs(omega), alpha - 1.0);
}

double coherence(const MfbmParams& params, Eigen::Index i, Eigen::Index j) {
  if (i == j) throw std::invalid_argument("coherence: requires two distinct components");
  const double Hi = params.H(i);
  const double Hj = params.H(j);
  const double g = gamma_fn(Hi + Hj + 1.0);
  return g * g / (gamma_fn(2.0 * Hi + 1.0) * gamma_fn(2.0 * Hj + 1.0)) * tau_modulus_sq(params, i, j) /
         (std::sin(kPi * Hi) * std::sin(kPi * Hj));
}

}  // namespace mfbm
