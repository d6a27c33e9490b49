#include "mfbm/representations.hpp"

#include "mfbm/errors.hpp"
#include "mfbm/spectral.hpp"
#include "mfbm/special.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfbm {

namespace {

constexpr double kHalfTol = 1e-12;

void require_away_from_half(const Eigen::VectorXd& H, const char* where) {
  for (Eigen::Index i = 0; i < H.size(); ++i) {
    if (std::abs(H(i) - 0.5) < kHalfTol) {
      std::ostringstream msg;
      msg << where << ": H[" << i << "] = 1/2 has no moving-average representation of this form";
      throw std::domain_error(msg.str());
    }
  }
}

// Row scalings of the map A1 = E1 (M+ + M-) / sqrt(2 pi), A2 = E2 (M+ - M-) / sqrt(2 pi).
double e1(double H) { return std::sin(0.25 * kPi * (2.0 * H - 1.0)) * gamma_fn(H + 0.5); }
double e2(double H) { return -std::cos(0.25 * kPi * (2.0 * H - 1.0)) * gamma_fn(H + 0.5); }

}  // namespace

Eigen::MatrixXcd spectral_gram_target(const MfbmParams& params) {
  const Eigen::Index p = params.p();
  Eigen::MatrixXcd target(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      target(i, j) = params.sigma(i) * params.sigma(j) / (2.0 * kPi) * gamma_fn(params.H(i) + params.H(j) + 1.0) *
                     tau(params, i, j, 1);
  return target;
}

SpectralMatrixA a_from_params(const MfbmParams& params, double psd_tol) {
  const AdmissibilityReport report = is_admissible(params, psd_tol);
  if (!report.admissible) {
    std::ostringstream msg;
    msg << "a_from_params: parameters do not define a mfBm (min eigenvalue of Q = " << report.min_eigenvalue << ")";
    throw ExistenceError(msg.str());
  }
  const Eigen::MatrixXcd target = spectral_gram_target(params);
  SpectralMatrixA out;
  Eigen::LLT<Eigen::MatrixXcd> llt(target);
  if (llt.info() != Eigen::Success) {
    out.cholesky_shift = psd_tol * target.cwiseAbs().maxCoeff();
    const Eigen::Index p = params.p();
    llt.compute(target + out.cholesky_shift * Eigen::MatrixXcd::Identity(p, p));
    if (llt.info() != Eigen::Success) throw ExistenceError("a_from_params: Cholesky failed after diagonal shift");
  }
  out.entries = llt.matrixL();
  return out;
}

SpectralMatrixA a_explicit_p2(const MfbmParams& params) {
  require_valid(params);
  if (params.p() != 2) throw std::invalid_argument("a_explicit_p2: requires p = 2");
  const double C = coherence(params, 0, 1);
  if (C > 1.0) {
    std::ostringstream msg;
    msg << "a_explicit_p2: coherence " << C << " exceeds 1, parameters do not define a mfBm";
    throw ExistenceError(msg.str());
  }
  SpectralMatrixA out;
  out.entries = Eigen::MatrixXcd::Zero(2, 2);
  if (C == 0.0) {
    const Eigen::MatrixXcd target = spectral_gram_target(params);
    out.entries(0, 0) = std::sqrt(target(0, 0).real());
    out.entries(1, 1) = std::sqrt(target(1, 1).real());
    return out;
  }
  const bool unit_sum = pair_kind(params, 0, 1) == PairKind::UnitSum;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double Hi = params.H(i);
      const double Hj = params.H(j);
      const double alpha = Hi + Hj;
      const double lambda = params.sigma(i) / (2.0 * std::sqrt(kPi)) * gamma_fn(alpha + 1.0) /
                            std::sqrt(gamma_fn(2.0 * Hj + 1.0) * std::sin(kPi * Hj));
      const double r = i == j ? 0.0 : std::sqrt((1.0 - C) / C);
      double rho_s;
      double eta_c;
      if (i != j && unit_sum) {
        rho_s = params.rho(i, j);
        eta_c = 0.5 * kPi * params.eta(i, j);
      } else {
        rho_s = params.rho(i, j) * std::sin(0.5 * kPi * alpha);
        eta_c = params.eta(i, j) * std::cos(0.5 * kPi * alpha);
      }
      out.entries(i, j) = lambda * std::complex<double>(rho_s + eta_c * r, rho_s * r - eta_c);
    }
  }
  return out;
}

MAMatrices ma_from_a(const SpectralMatrixA& A, const Eigen::VectorXd& H) {
  const Eigen::Index p = H.size();
  if (A.entries.rows() != p || A.entries.cols() != p)
    throw std::invalid_argument("ma_from_a: A must be p x p with p = size of H");
  require_away_from_half(H, "ma_from_a");
  const double scale = std::sqrt(0.5 * kPi);
  MAMatrices out{Eigen::MatrixXd(p, p), Eigen::MatrixXd(p, p)};
  for (Eigen::Index i = 0; i < p; ++i) {
    const double inv1 = 1.0 / e1(H(i));
    const double inv2 = 1.0 / e2(H(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      const double a1 = A.entries(i, j).real() * inv1;
      const double a2 = A.entries(i, j).imag() * inv2;
      out.m_plus(i, j) = scale * (a1 + a2);
      out.m_minus(i, j) = scale * (a1 - a2);
    }
  }
  return out;
}

SpectralMatrixA a_from_ma(const MAMatrices& mpm, const Eigen::VectorXd& H) {
  const Eigen::Index p = H.size();
  if (mpm.m_plus.rows() != p || mpm.m_plus.cols() != p || mpm.m_minus.rows() != p || mpm.m_minus.cols() != p)
    throw std::invalid_argument("a_from_ma: M+ and M- must be p x p with p = size of H");
  const double inv_scale = 1.0 / std::sqrt(2.0 * kPi);
  SpectralMatrixA out;
  out.entries.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      out.entries(i, j) = inv_scale * std::complex<double>(e1(H(i)) * (mpm.m_plus(i, j) + mpm.m_minus(i, j)),
                                                           e2(H(i)) * (mpm.m_plus(i, j) - mpm.m_minus(i, j)));
  return out;
}

MfbmParams params_from_ma(const MAMatrices& mpm, const Eigen::VectorXd& H, double one_tol) {
  const Eigen::Index p = H.size();
  if (mpm.m_plus.rows() != p || mpm.m_plus.cols() != p || mpm.m_minus.rows() != p || mpm.m_minus.cols() != p)
    throw std::invalid_argument("params_from_ma: M+ and M- must be p x p with p = size of H");
  for (Eigen::Index i = 0; i < p; ++i)
    if (!(H(i) > 0.0 && H(i) < 1.0)) throw std::invalid_argument("params_from_ma: H must lie in (0,1)");

  const Eigen::MatrixXd app = mpm.m_plus * mpm.m_plus.transpose();
  const Eigen::MatrixXd amm = mpm.m_minus * mpm.m_minus.transpose();
  const Eigen::MatrixXd apm = mpm.m_plus * mpm.m_minus.transpose();
  const Eigen::MatrixXd amp = apm.transpose();

  MfbmParams out;
  out.H = H;
  out.one_tol = one_tol;
  out.sigma.resize(p);
  out.rho = Eigen::MatrixXd::Identity(p, p);
  out.eta = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double s = std::sin(kPi * H(i));
    const double var = beta_fn(H(i) + 0.5, H(i) + 0.5) / s * (app(i, i) + amm(i, i) - 2.0 * s * apm(i, i));
    if (!(var > 0.0)) {
      std::ostringstream msg;
      msg << "params_from_ma: component " << i << " has zero variance";
      throw std::domain_error(msg.str());
    }
    out.sigma(i) = std::sqrt(var);
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double Hi = H(i);
      const double Hj = H(j);
      const double b = beta_fn(Hi + 0.5, Hj + 0.5);
      const double ss = out.sigma(i) * out.sigma(j);
      if (pair_kind(Hi, Hj, one_tol) == PairKind::UnitSum) {
        const double half_sin = 0.5 * (std::sin(kPi * Hi) + std::sin(kPi * Hj));
        out.rho(i, j) = b * (half_sin * (app(i, j) + amm(i, j)) - apm(i, j) - amp(i, j)) / ss;
        out.eta(i, j) = (Hj - Hi) * (app(i, j) - amm(i, j)) / ss;
      } else {
        const double sa = std::sin(kPi * (Hi + Hj));
        const double ci = std::cos(kPi * Hi);
        const double cj = std::cos(kPi * Hj);
        out.rho(i, j) = b / sa * ((app(i, j) + amm(i, j)) * (ci + cj) - (apm(i, j) + amp(i, j)) * sa) / ss;
        out.eta(i, j) = b / sa * ((app(i, j) - amm(i, j)) * (ci - cj) - (apm(i, j) - amp(i, j)) * sa) / ss;
      }
      out.rho(j, i) = out.rho(i, j);
      out.eta(j, i) = -out.eta(i, j);
    }
  }
  return out;
}

MfbmParams special_case_eta(const MfbmParams& params_rho_only, SpecialCase special_case) {
  MfbmParams out = params_rho_only;
  const Eigen::Index p = out.p();
  out.eta = Eigen::MatrixXd::Zero(p, p);
  if (special_case == SpecialCase::WellBalanced) return out;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double Hi = out.H(i);
      const double Hj = out.H(j);
      if (pair_kind(out, i, j) == PairKind::UnitSum) {
        if (std::abs(Hi - 0.5) < kHalfTol)
          throw std::domain_error("special_case_eta: causal eta~ is undefined at H_i = H_j = 1/2");
        out.eta(i, j) = out.rho(i, j) * 2.0 / (kPi * std::tan(kPi * Hi));
      } else {
        out.eta(i, j) = -out.rho(i, j) * std::tan(0.5 * kPi * (Hi + Hj)) * std::tan(0.5 * kPi * (Hi - Hj));
      }
      out.eta(j, i) = -out.eta(i, j);
    }
  }
  return out;
}

}  // namespace mfbm
