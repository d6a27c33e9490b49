#pragma once

#include "mfbm/circulant.hpp"
#include "mfbm/params.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mfbm {

inline constexpr int kMinReplicates = 30;

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Replicate mean of the lag-h sample cross-covariance
///   (1/(n-|h|)) sum_t x_i(t) x_j(t+h)
/// of the increments, with its replicate standard error. The increments have
/// known zero mean, so no centering is applied. Integrated paths are differenced
/// first. Throws std::invalid_argument for fewer than 30 replicates, |h| >= n or
/// paths of unequal length.
Estimate empirical_cross_cov(const std::vector<SamplePath>& paths, Eigen::Index i, Eigen::Index j, int h);

struct CovComparison {
  int lag = 0;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  int n_replicates = 0;
};

struct ComparisonSummary {
  std::size_t cells = 0;
  double max_abs_z = 0.0;
  double mean_z = 0.0;
  double fraction_over = 0.0;  ///< fraction of cells with |z| > z_gate
  double z_gate = 4.0;
};

struct ComparisonReport {
  std::vector<CovComparison> cells;
  ComparisonSummary summary;
};

/// Compares every (i, j, lag) cell against increment_cov(params, i, j, lag, delta).
ComparisonReport compare_report(const std::vector<SamplePath>& ensemble, const MfbmParams& params,
                                const std::vector<int>& lags, double delta = 1.0, double z_gate = 4.0);

/// Cell-wise two-sample comparison; z = (a - b) / sqrt(se_a^2 + se_b^2), and
/// `theoretical` holds the estimate from ensemble b.
ComparisonReport compare_ensembles(const std::vector<SamplePath>& a, const std::vector<SamplePath>& b,
                                   const std::vector<int>& lags, double z_gate = 4.0);

ComparisonSummary summarize(const std::vector<CovComparison>& cells, double z_gate = 4.0);

}  // namespace mfbm
