#pragma once

#include "mfbm/params.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace mfbm {

inline constexpr double kDefaultPsdTol = 1e-10;

/// Q_ij = Gamma(H_i + H_j + 1) tau_ij(1). Hermitian; sigma plays no role.
struct HermitianQ {
  Eigen::MatrixXcd entries;
};

HermitianQ build_q(const MfbmParams& params);

struct AdmissibilityReport {
  bool admissible = false;
  double min_eigenvalue = 0.0;
  double max_abs_entry = 0.0;
  std::optional<double> coherence12;  ///< set when p == 2
};

/// The parameters define a covariance iff Q is positive semidefinite. Accepts
/// when min eig(Q) >= -psd_tol * max |Q_ij|. Throws on structurally invalid params.
AdmissibilityReport is_admissible(const MfbmParams& params, double psd_tol = kDefaultPsdTol);

enum class SpecialCase { Causal, WellBalanced };

/// Largest |rho_12| for which the causal or well-balanced bivariate mfBm exists.
double max_correlation(double H1, double H2, SpecialCase special_case);

struct BoundaryPoint {
  double rho = 0.0;
  double eta_prime = 0.0;  ///< eta (1 - H1 - H2), or eta~ when H1 + H2 = 1
};

/// n_points points of the closed curve C_12 = 1 in the (rho, eta') plane, one per
/// ray at angle 2 pi k / n_points from the origin.
std::vector<BoundaryPoint> admissible_boundary(double H1, double H2, int n_points,
                                               double one_tol = kDefaultOneTol);

/// Bivariate params (sigma = 1) with the given point on the (rho, eta') plane.
MfbmParams params_from_boundary_point(double H1, double H2, const BoundaryPoint& point,
                                      double one_tol = kDefaultOneTol);

}  // namespace mfbm
