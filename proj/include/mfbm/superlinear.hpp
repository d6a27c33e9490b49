#pragma once

#include "mfbm/params.hpp"
#include "mfbm/stats.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfbm {

/// Coefficient regimes of a superlinear process
///   Z_i(t) = sum_j sum_k psi_ij(t - k) eps_j(k).
enum class KernelRegime {
  PowerPos,  ///< psi(k) ~ alpha k^(d-1), 0 < d < 1/2
  PowerNeg,  ///< psi(k) ~ alpha k^(d-1), -1/2 < d < 0, coefficients summing to zero
  Summable,  ///< absolutely summable with sum alpha (realized as alpha at lag 0), d = 0
};

/// Plus: lags k >= 1 (past innovations). Minus: lags k <= -1 (future innovations).
enum class Side { Plus, Minus };

/// How the power regimes are realized on the lattice.
enum class KernelShape {
  /// psi(k) = (alpha/d)[k^d - (k-1)^d] (PowerPos) or (alpha/d)[(k+1)^d - k^d] (PowerNeg),
  /// so that partial sums of the kernel follow alpha k^d / d without a constant offset.
  Increment,
  /// psi(k) = alpha k^(d-1) literally.
  PurePower,
};

struct KernelEntry {
  int i = 0;  ///< 0-based output component
  int j = 0;  ///< 0-based innovation component
  Side side = Side::Plus;
  KernelRegime regime = KernelRegime::Summable;
  double d = 0.0;
  double alpha = 1.0;
};

struct KernelSpec {
  int p = 1;
  std::vector<KernelEntry> entries;
  double truncation_factor = 4.0;         ///< K = ceil(truncation_factor * n) unless truncation is set
  std::optional<std::int64_t> truncation;  ///< explicit K
  KernelShape shape = KernelShape::Increment;
};

/// Throws std::invalid_argument describing the first problem found.
void validate_kernels(const KernelSpec& spec);

std::int64_t truncation_for(const KernelSpec& spec, std::int64_t n);

/// psi on |k| <= K, stored at index k + K. realize_kernel covers one side of one
/// entry (lag 0 carries the Summable mass and the PowerNeg zero-sum correction);
/// full_kernel adds every entry of the pair (i, j).
std::vector<double> realize_kernel(const KernelSpec& spec, Side side, int i, int j, std::int64_t K);
std::vector<double> full_kernel(const KernelSpec& spec, int i, int j, std::int64_t K);

enum class NoiseLaw { Gaussian, Rademacher };

struct PartialSumEnsemble {
  std::int64_t n = 0;
  std::int64_t truncation = 0;
  std::vector<double> tau;
  Eigen::VectorXd d;                  ///< normalization exponents d_i
  std::vector<Eigen::MatrixXd> sums;  ///< per replicate, tau.size() x p matrix of S_n(tau)
};

/// Monte Carlo draws of S_n(tau) = (n^(-d_i-1/2) sum_{t=1}^{[n tau]} Z_i(t))_i.
/// Requires K >= n and tau in [0, 1].
PartialSumEnsemble simulate_partial_sums(const KernelSpec& spec, NoiseLaw noise, std::int64_t n,
                                         const std::vector<double>& tau, std::uint64_t seed, int replicates,
                                         int threads = 0);

/// Replicate mean of S_i(tau_k) S_j(tau_k) (the mean is zero) with its standard error.
Estimate empirical_partial_sum_cov(const PartialSumEnsemble& ensemble, std::size_t tau_index, int i, int j);

/// Exact covariance matrix Cov(S_n(tau1), S_n(tau2)) of the truncated process with
/// unit-variance innovations.
Eigen::MatrixXd partial_sum_cov_exact(const KernelSpec& spec, std::int64_t n, double tau1, double tau2);

struct LimitTarget {
  Eigen::VectorXd d;
  Eigen::MatrixXd m_plus;
  Eigen::MatrixXd m_minus;
  bool brownian = false;  ///< every d_i = 0; then m_plus holds the Brownian mixing matrix
};

struct LimitResult {
  LimitTarget target;
  MfbmParams params;
};

/// Limit of S_n as n -> infinity: d_i is the largest exponent in row i and
/// M+_ij = alpha+_ij / d_i, M-_ij = -alpha-_ij / d_i on the entries attaining it. Rows mixing d_i = 0 with
/// d_i != 0 throw std::domain_error.
LimitResult limit_target(const KernelSpec& spec);

const char* to_string(KernelRegime regime);
KernelRegime regime_from_string(const std::string& name);

}  // namespace mfbm
