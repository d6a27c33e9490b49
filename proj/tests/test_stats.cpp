#include "mfbm/stats.hpp"

#include "mfbm/circulant.hpp"
#include "mfbm/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace {

std::vector<mfbm::SamplePath> white_noise(int replicates, int n, int p, std::uint64_t seed) {
  std::vector<mfbm::SamplePath> out(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    mfbm::NormalSource s(seed, static_cast<std::uint64_t>(r));
    out[static_cast<std::size_t>(r)].values.resize(n, p);
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < p; ++u) out[static_cast<std::size_t>(r)].values(t, u) = s.normal();
    out[static_cast<std::size_t>(r)].meta.n = n;
  }
  return out;
}

}  // namespace

TEST(Stats, WhiteNoiseLagZeroAndOne) {
  const auto paths = white_noise(400, 50, 2, 5);
  const auto e0 = mfbm::empirical_cross_cov(paths, 0, 0, 0);
  EXPECT_LE(std::abs(e0.estimate - 1.0), 4.0 * e0.std_error);
  const auto e1 = mfbm::empirical_cross_cov(paths, 0, 0, 1);
  EXPECT_LE(std::abs(e1.estimate), 4.0 * e1.std_error);
  const auto e01 = mfbm::empirical_cross_cov(paths, 0, 1, -3);
  EXPECT_LE(std::abs(e01.estimate), 4.0 * e01.std_error);
}

TEST(Stats, EstimatorByHand) {
  // 30 identical replicates: mean equals the per-path value and the stderr is 0.
  mfbm::SamplePath path;
  path.values.resize(4, 2);
  path.values << 1, 2, 3, -1, 0, 4, 2, 2;
  std::vector<mfbm::SamplePath> paths(30, path);
  // lag 1 of (x_0, x_1): (1*-1 + 3*4 + 0*2) / 3
  EXPECT_NEAR(mfbm::empirical_cross_cov(paths, 0, 1, 1).estimate, 11.0 / 3.0, 1e-13);
  // lag -1: sum_t x_0(t) x_1(t-1) = 3*2 + 0*-1 + 2*4
  EXPECT_NEAR(mfbm::empirical_cross_cov(paths, 0, 1, -1).estimate, 14.0 / 3.0, 1e-13);
  EXPECT_EQ(mfbm::empirical_cross_cov(paths, 0, 1, 1).std_error, 0.0);
}

TEST(Stats, IntegratedPathsAreDifferenced) {
  auto paths = white_noise(40, 20, 1, 9);
  auto integrated = paths;
  for (auto& p : integrated) {
    p.values = mfbm::integrate_increments(p.values);
    p.meta.integrated = true;
  }
  EXPECT_NEAR(mfbm::empirical_cross_cov(paths, 0, 0, 2).estimate,
              mfbm::empirical_cross_cov(integrated, 0, 0, 2).estimate, 1e-12);
}

TEST(Stats, Errors) {
  const auto few = white_noise(29, 10, 1, 1);
  EXPECT_THROW(mfbm::empirical_cross_cov(few, 0, 0, 0), std::invalid_argument);
  const auto ok = white_noise(30, 10, 1, 1);
  EXPECT_THROW(mfbm::empirical_cross_cov(ok, 0, 0, 10), std::invalid_argument);
  EXPECT_THROW(mfbm::empirical_cross_cov(ok, 0, 1, 0), std::out_of_range);
}

TEST(Stats, EmptyLagListGivesEmptyReport) {
  const auto paths = white_noise(30, 10, 1, 1);
  const auto report = mfbm::compare_report(paths, mfbm::independent_params(Eigen::VectorXd::Constant(1, 0.5),
                                                                           Eigen::VectorXd::Ones(1)),
                                           {});
  EXPECT_TRUE(report.cells.empty());
  EXPECT_EQ(report.summary.cells, 0u);
}

TEST(Stats, ReportIsInvariantToReplicateOrder) {
  auto paths = white_noise(60, 30, 2, 3);
  const auto params = mfbm::independent_params(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1, 1));
  const auto a = mfbm::compare_report(paths, params, {0, 1, 2, 5});
  std::mt19937 shuffler(4);
  std::shuffle(paths.begin(), paths.end(), shuffler);
  const auto b = mfbm::compare_report(paths, params, {0, 1, 2, 5});
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    EXPECT_NEAR(a.cells[k].empirical, b.cells[k].empirical, 1e-14);
    EXPECT_NEAR(a.cells[k].std_error, b.cells[k].std_error, 1e-14);
  }
  EXPECT_LE(a.summary.max_abs_z, 5.0);
}

TEST(Stats, WrongHurstIsDetected) {
  const auto truth = mfbm::independent_params(Eigen::VectorXd::Constant(1, 0.8), Eigen::VectorXd::Ones(1));
  mfbm::SimulationConfig cfg;
  cfg.n = 32;
  cfg.replicates = 1000;
  cfg.seed = 77;
  const auto paths = mfbm::simulate(mfbm::build_plan(truth, cfg), cfg);
  std::vector<int> lags;
  for (int h = 0; h <= 20; ++h) lags.push_back(h);
  EXPECT_LE(mfbm::compare_report(paths, truth, lags).summary.fraction_over, 0.05);
  const auto wrong = mfbm::independent_params(Eigen::VectorXd::Constant(1, 0.6), Eigen::VectorXd::Ones(1));
  EXPECT_GT(mfbm::compare_report(paths, wrong, lags).summary.max_abs_z, 10.0);
}
