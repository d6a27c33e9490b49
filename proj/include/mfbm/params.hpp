#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mfbm {

/// Band on |H_i + H_j - 1| inside which a pair uses the H_i + H_j = 1 formulas.
inline constexpr double kDefaultOneTol = 1e-9;

/// Which closed form governs the cross-covariance of a component pair.
enum class PairKind {
  GenericSum,  ///< H_i + H_j != 1: coefficients (rho, eta)
  UnitSum,     ///< H_i + H_j == 1: coefficients (rho~, eta~)
};

/**
 * Covariance-level parameterization of a p-variate fractional Brownian motion.
 *
 * `rho` and `eta` hold (rho, eta) for GenericSum pairs and (rho~, eta~) for
 * UnitSum pairs; which reading applies is decided by pair_kind(). The diagonal
 * is rho_ii = 1, eta_ii = 0.
 *
 * Structural constraints (symmetry, ranges) are checked by validate(). They are
 * necessary but not sufficient: whether the covariance exists is decided by
 * is_admissible() in existence.hpp.
 */
struct MfbmParams {
  Eigen::VectorXd H;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd rho;
  Eigen::MatrixXd eta;
  double one_tol = kDefaultOneTol;

  Eigen::Index p() const { return H.size(); }
};

/// Builds params with the given Hurst exponents and scales and independent
/// components (rho = I, eta = 0).
MfbmParams independent_params(const Eigen::VectorXd& H, const Eigen::VectorXd& sigma);

/// Two-component params from a single pair of coefficients.
MfbmParams pair_params(double H1, double H2, double rho12, double eta12,
                       double sigma1 = 1.0, double sigma2 = 1.0);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Collects every violated structural invariant. An empty report does not
/// imply that the covariance exists.
ValidationReport validate(const MfbmParams& params);

/// Throws std::invalid_argument listing all violations if validate() fails.
void require_valid(const MfbmParams& params);

/// Throws std::out_of_range for indices outside [0, p).
PairKind pair_kind(const MfbmParams& params, Eigen::Index i, Eigen::Index j);
PairKind pair_kind(double Hi, double Hj, double one_tol = kDefaultOneTol);

/// eta' = (1 - H_i - H_j) eta. Throws std::domain_error on a UnitSum pair,
/// where eta~ already plays this role.
double eta_reparam(const MfbmParams& params, Eigen::Index i, Eigen::Index j);

/// Inverse of the eta' map for a GenericSum pair.
double eta_from_reparam(double Hi, double Hj, double eta_prime,
                        double one_tol = kDefaultOneTol);

}  // namespace mfbm
