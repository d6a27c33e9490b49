#include "mfbm/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfbm {

MfbmParams independent_params(const Eigen::VectorXd& H, const Eigen::VectorXd& sigma) {
  MfbmParams params;
  params.H = H;
  params.sigma = sigma;
  params.rho = Eigen::MatrixXd::Identity(H.size(), H.size());
  params.eta = Eigen::MatrixXd::Zero(H.size(), H.size());
  return params;
}

MfbmParams pair_params(double H1, double H2, double rho12, double eta12,
                       double sigma1, double sigma2) {
  MfbmParams params = independent_params(Eigen::Vector2d(H1, H2), Eigen::Vector2d(sigma1, sigma2));
  params.rho(0, 1) = params.rho(1, 0) = rho12;
  params.eta(0, 1) = eta12;
  params.eta(1, 0) = -eta12;
  return params;
}

ValidationReport validate(const MfbmParams& params) {
  ValidationReport report;
  auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

  const Eigen::Index p = params.p();
  if (p < 1) {
    fail("p must be at least 1");
    return report;
  }
  if (params.sigma.size() != p) fail("sigma must have p entries");
  if (params.rho.rows() != p || params.rho.cols() != p) fail("rho must be p x p");
  if (params.eta.rows() != p || params.eta.cols() != p) fail("eta must be p x p");
  if (!(params.one_tol >= 0.0)) fail("one_tol must be nonnegative");
  if (!report.ok()) return report;

  for (Eigen::Index i = 0; i < p; ++i) {
    const double h = params.H(i);
    if (!(h > 0.0 && h < 1.0)) {
      std::ostringstream os;
      os << "H[" << i + 1 << "] = " << h << " not in (0,1)";
      fail(os.str());
    }
    const double s = params.sigma(i);
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream os;
      os << "sigma[" << i + 1 << "] = " << s << " not positive";
      fail(os.str());
    }
  }

  bool rho_sym = true, rho_range = true, rho_diag = true, rho_finite = true;
  bool eta_anti = true, eta_diag = true, eta_finite = true;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (params.rho(i, i) != 1.0) rho_diag = false;
    if (params.eta(i, i) != 0.0) eta_diag = false;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double r = params.rho(i, j);
      const double e = params.eta(i, j);
      if (!std::isfinite(r)) rho_finite = false;
      if (!std::isfinite(e)) eta_finite = false;
      if (r != params.rho(j, i)) rho_sym = false;
      if (std::abs(r) > 1.0) rho_range = false;
      if (e != -params.eta(j, i)) eta_anti = false;
    }
  }
  if (!rho_finite) fail("rho has non-finite entries");
  if (!eta_finite) fail("eta has non-finite entries");
  if (!rho_sym) fail("rho not symmetric");
  if (!rho_diag) fail("rho diagonal not 1");
  if (!rho_range) fail("rho out of [-1,1]");
  if (!eta_anti) fail("eta not antisymmetric");
  if (!eta_diag) fail("eta diagonal not 0");
  return report;
}

void require_valid(const MfbmParams& params) {
  const ValidationReport report = validate(params);
  if (report.ok()) return;
  std::string msg = "invalid mfBm parameters:";
  for (const auto& v : report.violations) msg += " " + v + ";";
  throw std::invalid_argument(msg);
}

PairKind pair_kind(double Hi, double Hj, double one_tol) {
  return std::abs(Hi + Hj - 1.0) <= one_tol ? PairKind::UnitSum : PairKind::GenericSum;
}

PairKind pair_kind(const MfbmParams& params, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index p = params.p();
  if (i < 0 || j < 0 || i >= p || j >= p) throw std::out_of_range("pair_kind: component index out of range");
  return pair_kind(params.H(i), params.H(j), params.one_tol);
}

double eta_reparam(const MfbmParams& params, Eigen::Index i, Eigen::Index j) {
  if (pair_kind(params, i, j) == PairKind::UnitSum)
    throw std::domain_error("eta_reparam: H_i + H_j = 1, use eta~ directly");
  return (1.0 - params.H(i) - params.H(j)) * params.eta(i, j);
}

double eta_from_reparam(double Hi, double Hj, double eta_prime, double one_tol) {
  if (pair_kind(Hi, Hj, one_tol) == PairKind::UnitSum)
    throw std::domain_error("eta_from_reparam: H_i + H_j = 1, use eta~ directly");
  return eta_prime / (1.0 - Hi - Hj);
}

}  // namespace mfbm
