#include "mfbm/params.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using mfbm::MfbmParams;

namespace {

bool mentions(const mfbm::ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Params, IndependentParamsAreValid) {
  const MfbmParams p = mfbm::independent_params(Eigen::Vector3d(0.2, 0.5, 0.9), Eigen::Vector3d(1.0, 2.0, 0.5));
  EXPECT_TRUE(mfbm::validate(p).ok());
  EXPECT_EQ(p.p(), 3);
  EXPECT_EQ(p.rho, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(p.eta, Eigen::MatrixXd::Zero(3, 3));
}

TEST(Params, ReportsEveryViolation) {
  MfbmParams p = mfbm::pair_params(0.3, 0.6, 0.4, 0.2);
  p.H(0) = 1.0;
  p.sigma(1) = -1.0;
  p.rho(0, 1) = 1.5;
  p.eta(1, 0) = 0.7;
  p.rho(1, 1) = 0.9;
  const auto report = mfbm::validate(p);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(mentions(report, "H[1]"));
  EXPECT_TRUE(mentions(report, "sigma[2]"));
  EXPECT_TRUE(mentions(report, "rho out of [-1,1]"));
  EXPECT_TRUE(mentions(report, "rho not symmetric"));
  EXPECT_TRUE(mentions(report, "eta not antisymmetric"));
  EXPECT_TRUE(mentions(report, "rho diagonal not 1"));
  EXPECT_THROW(mfbm::require_valid(p), std::invalid_argument);
}

TEST(Params, DimensionMismatchIsInvalid) {
  MfbmParams p = mfbm::pair_params(0.3, 0.6, 0.4, 0.2);
  p.sigma.resize(3);
  p.sigma.setOnes();
  EXPECT_FALSE(mfbm::validate(p).ok());
}

TEST(Params, PairKindUsesTolerance) {
  EXPECT_EQ(mfbm::pair_kind(0.3, 0.7), mfbm::PairKind::UnitSum);
  EXPECT_EQ(mfbm::pair_kind(0.3, 0.7 + 5e-10), mfbm::PairKind::UnitSum);
  EXPECT_EQ(mfbm::pair_kind(0.3, 0.7 + 1e-6), mfbm::PairKind::GenericSum);
  EXPECT_EQ(mfbm::pair_kind(0.5, 0.5), mfbm::PairKind::UnitSum);
  const MfbmParams p = mfbm::pair_params(0.3, 0.6, 0.4, 0.2);
  EXPECT_THROW(mfbm::pair_kind(p, 0, 2), std::out_of_range);
}

TEST(Params, EtaReparamRoundTrip) {
  const MfbmParams p = mfbm::pair_params(0.2, 0.4, 0.3, 0.25);
  const double eta_prime = mfbm::eta_reparam(p, 0, 1);
  EXPECT_NEAR(eta_prime, 0.25 * 0.4, 1e-15);
  EXPECT_NEAR(mfbm::eta_from_reparam(0.2, 0.4, eta_prime), 0.25, 1e-15);
  const MfbmParams unit = mfbm::pair_params(0.2, 0.8, 0.3, 0.1);
  EXPECT_THROW(mfbm::eta_reparam(unit, 0, 1), std::domain_error);
}
