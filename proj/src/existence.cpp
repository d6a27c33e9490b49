#include "mfbm/existence.hpp"

#include "mfbm/spectral.hpp"
#include "mfbm/special.hpp"

#include <cmath>
#include <stdexcept>

namespace mfbm {

HermitianQ build_q(const MfbmParams& params) {
  const Eigen::Index p = params.p();
  HermitianQ q{Eigen::MatrixXcd(p, p)};
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      q.entries(i, j) = gamma_fn(params.H(i) + params.H(j) + 1.0) * tau(params, i, j, 1);
  return q;
}

AdmissibilityReport is_admissible(const MfbmParams& params, double psd_tol) {
  require_valid(params);
  const HermitianQ q = build_q(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(q.entries, Eigen::EigenvaluesOnly);
  AdmissibilityReport report;
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.max_abs_entry = q.entries.cwiseAbs().maxCoeff();
  report.admissible = report.min_eigenvalue >= -psd_tol * report.max_abs_entry;
  if (params.p() == 2) report.coherence12 = coherence(params, 0, 1);
  return report;
}

double max_correlation(double H1, double H2, SpecialCase special_case) {
  if (!(H1 > 0.0 && H1 < 1.0 && H2 > 0.0 && H2 < 1.0))
    throw std::invalid_argument("max_correlation: H1, H2 must lie in (0,1)");
  const double g12 = gamma_fn(H1 + H2 + 1.0);
  const double s12 = std::sin(0.5 * kPi * (H1 + H2));
  double lambda = 1.0;
  if (special_case == SpecialCase::Causal) {
    const double c = std::cos(0.5 * kPi * (H1 - H2));
    lambda = c * c;
  }
  const double rho_sq = gamma_fn(2.0 * H1 + 1.0) * gamma_fn(2.0 * H2 + 1.0) / (g12 * g12) *
                        std::sin(kPi * H1) * std::sin(kPi * H2) / (s12 * s12) * lambda;
  return std::sqrt(rho_sq);
}

namespace {

// Coherence of the pair as a function of (rho, eta'); a quadratic form.
struct CoherenceForm {
  double a_rho = 0.0;
  double a_eta = 0.0;

  double operator()(double rho, double eta_prime) const { return a_rho * rho * rho + a_eta * eta_prime * eta_prime; }
};

CoherenceForm coherence_form(double H1, double H2, double one_tol) {
  const double alpha = H1 + H2;
  const double g = gamma_fn(alpha + 1.0);
  const double k = g * g / (gamma_fn(2.0 * H1 + 1.0) * gamma_fn(2.0 * H2 + 1.0)) /
                   (std::sin(kPi * H1) * std::sin(kPi * H2));
  CoherenceForm form;
  if (pair_kind(H1, H2, one_tol) == PairKind::UnitSum) {
    form.a_rho = k;
    form.a_eta = k * 0.25 * kPi * kPi;
  } else {
    const double s = std::sin(0.5 * kPi * alpha);
    const double c = std::cos(0.5 * kPi * alpha) / (1.0 - alpha);
    form.a_rho = k * s * s;
    form.a_eta = k * c * c;
  }
  return form;
}

}  // namespace

std::vector<BoundaryPoint> admissible_boundary(double H1, double H2, int n_points, double one_tol) {
  if (n_points < 1) throw std::invalid_argument("admissible_boundary: n_points must be positive");
  if (!(H1 > 0.0 && H1 < 1.0 && H2 > 0.0 && H2 < 1.0))
    throw std::invalid_argument("admissible_boundary: H1, H2 must lie in (0,1)");
  const CoherenceForm form = coherence_form(H1, H2, one_tol);
  if (!(form.a_rho > 0.0) || !(form.a_eta > 0.0) || !std::isfinite(form.a_rho) || !std::isfinite(form.a_eta))
    throw std::domain_error("admissible_boundary: coherence form is degenerate for these H");

  // C is homogeneous of degree 2 along rays, so the crossing radius is exact.
  std::vector<BoundaryPoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const double theta = 2.0 * kPi * k / n_points;
    const double u = std::cos(theta);
    const double v = std::sin(theta);
    const double radius = 1.0 / std::sqrt(form(u, v));
    points.push_back({radius * u, radius * v});
  }
  return points;
}

MfbmParams params_from_boundary_point(double H1, double H2, const BoundaryPoint& point, double one_tol) {
  const double eta = pair_kind(H1, H2, one_tol) == PairKind::UnitSum
                         ? point.eta_prime
                         : eta_from_reparam(H1, H2, point.eta_prime, one_tol);
  MfbmParams params = pair_params(H1, H2, point.rho, eta);
  params.one_tol = one_tol;
  return params;
}

}  // namespace mfbm
