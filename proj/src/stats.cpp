#include "mfbm/stats.hpp"

#include "mfbm/covariance.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace mfbm {

namespace {

Eigen::MatrixXd increments_of(const SamplePath& path) {
  if (!path.meta.integrated) return path.values;
  const Eigen::Index rows = path.values.rows() - 1;
  return path.values.bottomRows(rows) - path.values.topRows(rows);
}

double z_score(double diff, double se) {
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

}  // namespace

Estimate empirical_cross_cov(const std::vector<SamplePath>& paths, Eigen::Index i, Eigen::Index j, int h) {
  if (static_cast<int>(paths.size()) < kMinReplicates)
    throw std::invalid_argument("empirical_cross_cov: at least 30 replicates are required");
  const Eigen::MatrixXd first = increments_of(paths.front());
  const Eigen::Index n = first.rows();
  if (i < 0 || j < 0 || i >= first.cols() || j >= first.cols())
    throw std::out_of_range("empirical_cross_cov: component index out of range");
  if (std::abs(h) >= n) throw std::invalid_argument("empirical_cross_cov: |h| must be smaller than n");

  const Eigen::Index count = n - std::abs(h);
  const Eigen::Index start_i = h >= 0 ? 0 : -h;
  const Eigen::Index start_j = h >= 0 ? h : 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const SamplePath& path : paths) {
    const Eigen::MatrixXd x = increments_of(path);
    if (x.rows() != n || x.cols() != first.cols())
      throw std::invalid_argument("empirical_cross_cov: paths have different shapes");
    const double c = x.col(i).segment(start_i, count).dot(x.col(j).segment(start_j, count)) / static_cast<double>(count);
    sum += c;
    sum_sq += c * c;
  }
  const double r = static_cast<double>(paths.size());
  const double mean = sum / r;
  const double var = std::max(0.0, (sum_sq - r * mean * mean) / (r - 1.0));
  return {mean, std::sqrt(var / r)};
}

ComparisonSummary summarize(const std::vector<CovComparison>& cells, double z_gate) {
  ComparisonSummary s;
  s.z_gate = z_gate;
  s.cells = cells.size();
  if (cells.empty()) return s;
  std::size_t over = 0;
  double total = 0.0;
  for (const auto& c : cells) {
    s.max_abs_z = std::max(s.max_abs_z, std::abs(c.z));
    total += c.z;
    if (std::abs(c.z) > z_gate) ++over;
  }
  s.mean_z = total / static_cast<double>(cells.size());
  s.fraction_over = static_cast<double>(over) / static_cast<double>(cells.size());
  return s;
}

ComparisonReport compare_report(const std::vector<SamplePath>& ensemble, const MfbmParams& params,
                                const std::vector<int>& lags, double delta, double z_gate) {
  ComparisonReport report;
  if (lags.empty()) {
    report.summary = summarize(report.cells, z_gate);
    return report;
  }
  if (ensemble.empty()) throw std::invalid_argument("compare_report: empty ensemble");
  const Eigen::Index p = params.p();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      for (int h : lags) {
        const Estimate e = empirical_cross_cov(ensemble, i, j, h);
        CovComparison c;
        c.lag = h;
        c.i = i;
        c.j = j;
        c.empirical = e.estimate;
        c.theoretical = increment_cov(params, i, j, static_cast<double>(h) * delta, delta);
        c.std_error = e.std_error;
        c.z = z_score(c.empirical - c.theoretical, c.std_error);
        c.n_replicates = static_cast<int>(ensemble.size());
        report.cells.push_back(c);
      }
    }
  }
  report.summary = summarize(report.cells, z_gate);
  return report;
}

ComparisonReport compare_ensembles(const std::vector<SamplePath>& a, const std::vector<SamplePath>& b,
                                   const std::vector<int>& lags, double z_gate) {
  ComparisonReport report;
  if (!lags.empty()) {
    if (a.empty() || b.empty()) throw std::invalid_argument("compare_ensembles: empty ensemble");
    const Eigen::Index p = increments_of(a.front()).cols();
    if (increments_of(b.front()).cols() != p) throw std::invalid_argument("compare_ensembles: dimension mismatch");
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        for (int h : lags) {
          const Estimate ea = empirical_cross_cov(a, i, j, h);
          const Estimate eb = empirical_cross_cov(b, i, j, h);
          CovComparison c;
          c.lag = h;
          c.i = i;
          c.j = j;
          c.empirical = ea.estimate;
          c.theoretical = eb.estimate;
          c.std_error = std::hypot(ea.std_error, eb.std_error);
          c.z = z_score(ea.estimate - eb.estimate, c.std_error);
          c.n_replicates = static_cast<int>(std::min(a.size(), b.size()));
          report.cells.push_back(c);
        }
      }
    }
  }
  report.summary = summarize(report.cells, z_gate);
  return report;
}

}  // namespace mfbm
