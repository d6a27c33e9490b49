#include "mfbm/superlinear.hpp"

#include "mfbm/fft.hpp"
#include "mfbm/representations.hpp"
#include "mfbm/rng.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mfbm {

namespace {

constexpr double kExponentTol = 1e-12;

std::size_t next_power_of_two(std::size_t x) {
  std::size_t n = 1;
  while (n < x) n <<= 1;
  return n;
}

std::int64_t steps_for(std::int64_t n, double tau) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * tau + 1e-9));
}

double power_coefficient(const KernelSpec& spec, const KernelEntry& e, std::int64_t k) {
  const double x = static_cast<double>(k);
  if (spec.shape == KernelShape::PurePower) return e.alpha * std::pow(x, e.d - 1.0);
  if (e.regime == KernelRegime::PowerPos) return e.alpha / e.d * (std::pow(x, e.d) - std::pow(x - 1.0, e.d));
  return e.alpha / e.d * (std::pow(x + 1.0, e.d) - std::pow(x, e.d));
}

// Adds one entry to psi stored at index k + K.
void add_entry(const KernelSpec& spec, const KernelEntry& e, std::int64_t K, std::vector<double>& psi) {
  const std::int64_t dir = e.side == Side::Plus ? 1 : -1;
  if (e.regime == KernelRegime::Summable) {
    psi[static_cast<std::size_t>(K)] += e.alpha;
    return;
  }
  double total = 0.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    const double c = power_coefficient(spec, e, k);
    psi[static_cast<std::size_t>(K + dir * k)] += c;
    total += c;
  }
  if (e.regime == KernelRegime::PowerNeg) psi[static_cast<std::size_t>(K)] -= total;
}

// Largest exponent per row.
Eigen::VectorXd row_exponents(const KernelSpec& spec) {
  Eigen::VectorXd d = Eigen::VectorXd::Constant(spec.p, -std::numeric_limits<double>::infinity());
  for (const auto& e : spec.entries) d(e.i) = std::max(d(e.i), e.d);
  return d;
}

}  // namespace

const char* to_string(KernelRegime regime) {
  switch (regime) {
    case KernelRegime::PowerPos: return "power_pos";
    case KernelRegime::PowerNeg: return "power_neg";
    case KernelRegime::Summable: return "summable";
  }
  return "unknown";
}

KernelRegime regime_from_string(const std::string& name) {
  if (name == "power_pos") return KernelRegime::PowerPos;
  if (name == "power_neg") return KernelRegime::PowerNeg;
  if (name == "summable") return KernelRegime::Summable;
  throw std::invalid_argument("unknown kernel regime '" + name + "'");
}

void validate_kernels(const KernelSpec& spec) {
  if (spec.p < 1) throw std::invalid_argument("kernels: p must be positive");
  if (spec.entries.empty()) throw std::invalid_argument("kernels: no entries");
  if (spec.truncation && *spec.truncation < 1) throw std::invalid_argument("kernels: truncation must be positive");
  if (!spec.truncation && !(spec.truncation_factor > 0.0))
    throw std::invalid_argument("kernels: truncation_factor must be positive");
  std::set<std::tuple<int, int, int>> seen;
  std::vector<bool> row_used(static_cast<std::size_t>(spec.p), false);
  for (const auto& e : spec.entries) {
    std::ostringstream where;
    where << "kernels: entry (" << e.i << ", " << e.j << (e.side == Side::Plus ? ", +)" : ", -)");
    if (e.i < 0 || e.j < 0 || e.i >= spec.p || e.j >= spec.p)
      throw std::invalid_argument(where.str() + " has a component index out of range");
    if (!seen.insert({e.i, e.j, e.side == Side::Plus ? 1 : -1}).second)
      throw std::invalid_argument(where.str() + " is duplicated");
    if (e.alpha == 0.0 || !std::isfinite(e.alpha)) throw std::invalid_argument(where.str() + " needs a nonzero alpha");
    switch (e.regime) {
      case KernelRegime::PowerPos:
        if (!(e.d > 0.0 && e.d < 0.5)) throw std::invalid_argument(where.str() + ": power_pos needs 0 < d < 1/2");
        break;
      case KernelRegime::PowerNeg:
        if (!(e.d > -0.5 && e.d < 0.0)) throw std::invalid_argument(where.str() + ": power_neg needs -1/2 < d < 0");
        break;
      case KernelRegime::Summable:
        if (e.d != 0.0) throw std::invalid_argument(where.str() + ": summable needs d = 0");
        break;
    }
    row_used[static_cast<std::size_t>(e.i)] = true;
  }
  for (int i = 0; i < spec.p; ++i)
    if (!row_used[static_cast<std::size_t>(i)])
      throw std::invalid_argument("kernels: component " + std::to_string(i) + " has no kernel");
}

std::int64_t truncation_for(const KernelSpec& spec, std::int64_t n) {
  if (spec.truncation) return *spec.truncation;
  return static_cast<std::int64_t>(std::ceil(spec.truncation_factor * static_cast<double>(n)));
}

std::vector<double> realize_kernel(const KernelSpec& spec, Side side, int i, int j, std::int64_t K) {
  validate_kernels(spec);
  if (K < 1) throw std::invalid_argument("realize_kernel: K must be positive");
  std::vector<double> psi(static_cast<std::size_t>(2 * K + 1), 0.0);
  for (const auto& e : spec.entries)
    if (e.i == i && e.j == j && e.side == side) add_entry(spec, e, K, psi);
  return psi;
}

std::vector<double> full_kernel(const KernelSpec& spec, int i, int j, std::int64_t K) {
  validate_kernels(spec);
  if (K < 1) throw std::invalid_argument("full_kernel: K must be positive");
  std::vector<double> psi(static_cast<std::size_t>(2 * K + 1), 0.0);
  for (const auto& e : spec.entries)
    if (e.i == i && e.j == j) add_entry(spec, e, K, psi);
  return psi;
}

PartialSumEnsemble simulate_partial_sums(const KernelSpec& spec, NoiseLaw noise, std::int64_t n,
                                         const std::vector<double>& tau, std::uint64_t seed, int replicates,
                                         int threads) {
  validate_kernels(spec);
  if (n < 1) throw std::invalid_argument("simulate_partial_sums: n must be positive");
  if (replicates < 1) throw std::invalid_argument("simulate_partial_sums: replicates must be positive");
  for (double t : tau)
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("simulate_partial_sums: tau must lie in [0, 1]");
  const std::int64_t K = truncation_for(spec, n);
  if (K < n) throw std::invalid_argument("simulate_partial_sums: truncation K must be at least n");

  const int p = spec.p;
  const std::int64_t innovations = n + 2 * K;
  const std::size_t N = next_power_of_two(static_cast<std::size_t>(innovations));
  const std::size_t bins = N / 2 + 1;

  PartialSumEnsemble out;
  out.n = n;
  out.truncation = K;
  out.tau = tau;
  out.d = row_exponents(spec);
  out.sums.resize(static_cast<std::size_t>(replicates));

  // Kernel spectra, one per (i, j) pair that has a kernel.
  std::vector<std::vector<std::complex<double>>> kernel_hat(static_cast<std::size_t>(p * p));
  {
    RealDft dft(N);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        bool present = false;
        for (const auto& e : spec.entries) present = present || (e.i == i && e.j == j);
        if (!present) continue;
        const std::vector<double> psi = full_kernel(spec, i, j, K);
        std::fill(dft.real(), dft.real() + N, 0.0);
        std::copy(psi.begin(), psi.end(), dft.real());
        dft.forward();
        kernel_hat[static_cast<std::size_t>(i * p + j)].assign(dft.spectrum(), dft.spectrum() + bins);
      }
    }
  }

  std::vector<double> norm(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) norm[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(n), -out.d(i) - 0.5) / static_cast<double>(N);
  std::vector<std::int64_t> steps;
  for (double t : tau) steps.push_back(steps_for(n, t));

  struct Worker {
    std::unique_ptr<RealDft> dft;
    std::vector<std::vector<std::complex<double>>> eps_hat;
    std::vector<std::complex<double>> acc;
  };
  const int workers = detail::resolve_threads(threads, static_cast<std::size_t>(replicates));
  std::vector<Worker> pool(static_cast<std::size_t>(workers));
  for (auto& w : pool) {
    w.dft = std::make_unique<RealDft>(N);
    w.eps_hat.assign(static_cast<std::size_t>(p), std::vector<std::complex<double>>(bins));
    w.acc.resize(bins);
  }

  detail::parallel_for(static_cast<std::size_t>(replicates), workers, [&](std::size_t r, int wid) {
    Worker& w = pool[static_cast<std::size_t>(wid)];
    NormalSource source(seed, r);
    for (int j = 0; j < p; ++j) {
      double* x = w.dft->real();
      for (std::int64_t q = 0; q < innovations; ++q)
        x[q] = noise == NoiseLaw::Gaussian ? source.normal() : source.rademacher();
      std::fill(x + innovations, x + N, 0.0);
      w.dft->forward();
      std::copy(w.dft->spectrum(), w.dft->spectrum() + bins, w.eps_hat[static_cast<std::size_t>(j)].begin());
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tau.size()), p);
    for (int i = 0; i < p; ++i) {
      std::fill(w.acc.begin(), w.acc.end(), std::complex<double>(0.0, 0.0));
      for (int j = 0; j < p; ++j) {
        const auto& g = kernel_hat[static_cast<std::size_t>(i * p + j)];
        if (g.empty()) continue;
        const auto& e = w.eps_hat[static_cast<std::size_t>(j)];
        for (std::size_t b = 0; b < bins; ++b) w.acc[b] += g[b] * e[b];
      }
      std::copy(w.acc.begin(), w.acc.end(), w.dft->spectrum());
      w.dft->backward();
      // Z_i(t) sits at index t - 1 + 2K of the circular convolution.
      const double* y = w.dft->real() + 2 * K;
      std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
      for (std::int64_t t = 0; t < n; ++t) prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] + y[t];
      for (std::size_t s = 0; s < steps.size(); ++s)
        sums(static_cast<Eigen::Index>(s), i) = prefix[static_cast<std::size_t>(steps[s])] * norm[static_cast<std::size_t>(i)];
    }
    out.sums[r] = std::move(sums);
  });
  return out;
}

Estimate empirical_partial_sum_cov(const PartialSumEnsemble& ensemble, std::size_t tau_index, int i, int j) {
  if (ensemble.sums.size() < 2) throw std::invalid_argument("empirical_partial_sum_cov: need at least 2 replicates");
  if (tau_index >= ensemble.tau.size()) throw std::invalid_argument("empirical_partial_sum_cov: tau index out of range");
  const auto p = ensemble.d.size();
  if (i < 0 || j < 0 || i >= p || j >= p) throw std::invalid_argument("empirical_partial_sum_cov: component out of range");
  const auto R = static_cast<double>(ensemble.sums.size());
  const auto k = static_cast<Eigen::Index>(tau_index);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& s : ensemble.sums) {
    const double v = s(k, i) * s(k, j);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / R;
  const double var = std::max(0.0, (sum_sq - R * mean * mean) / (R - 1.0));
  return {mean, std::sqrt(var / R)};
}

Eigen::MatrixXd partial_sum_cov_exact(const KernelSpec& spec, std::int64_t n, double tau1, double tau2) {
  validate_kernels(spec);
  if (n < 1) throw std::invalid_argument("partial_sum_cov_exact: n must be positive");
  if (!(tau1 >= 0.0 && tau1 <= 1.0 && tau2 >= 0.0 && tau2 <= 1.0))
    throw std::invalid_argument("partial_sum_cov_exact: tau must lie in [0, 1]");
  const std::int64_t K = truncation_for(spec, n);
  const int p = spec.p;
  const Eigen::VectorXd d = row_exponents(spec);
  const std::int64_t T1 = steps_for(n, tau1);
  const std::int64_t T2 = steps_for(n, tau2);
  const std::int64_t k_lo = 1 - K;
  const std::int64_t k_hi = n + K;
  const auto count = static_cast<Eigen::Index>(k_hi - k_lo + 1);

  // a(k) = sum_{t=1}^{T} psi(t - k) = P(T - k) - P(-k), with P the prefix sum of psi.
  auto weights = [&](const std::vector<double>& prefix, std::int64_t T) {
    auto P = [&](std::int64_t x) {
      if (x < -K) return 0.0;
      if (x > K) return prefix.back();
      return prefix[static_cast<std::size_t>(x + K)];
    };
    Eigen::VectorXd a(count);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) a(k - k_lo) = P(T - k) - P(-k);
    return a;
  };

  std::vector<Eigen::VectorXd> a1(static_cast<std::size_t>(p * p));
  std::vector<Eigen::VectorXd> a2(static_cast<std::size_t>(p * p));
  for (int i = 0; i < p; ++i) {
    for (int l = 0; l < p; ++l) {
      const std::vector<double> psi = full_kernel(spec, i, l, K);
      std::vector<double> prefix(psi.size());
      double run = 0.0;
      for (std::size_t s = 0; s < psi.size(); ++s) prefix[s] = (run += psi[s]);
      a1[static_cast<std::size_t>(i * p + l)] = weights(prefix, T1);
      a2[static_cast<std::size_t>(i * p + l)] = weights(prefix, T2);
    }
  }
  Eigen::MatrixXd cov(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int l = 0; l < p; ++l)
        s += a1[static_cast<std::size_t>(i * p + l)].dot(a2[static_cast<std::size_t>(j * p + l)]);
      cov(i, j) = s * std::pow(static_cast<double>(n), -d(i) - d(j) - 1.0);
    }
  }
  return cov;
}

LimitResult limit_target(const KernelSpec& spec) {
  validate_kernels(spec);
  const int p = spec.p;
  LimitResult out;
  out.target.d = row_exponents(spec);
  out.target.m_plus = Eigen::MatrixXd::Zero(p, p);
  out.target.m_minus = Eigen::MatrixXd::Zero(p, p);

  int zero_rows = 0;
  for (int i = 0; i < p; ++i)
    if (std::abs(out.target.d(i)) <= kExponentTol) ++zero_rows;

  if (zero_rows == p) {
    // Brownian limit: X = B W with B_ij the total mass of psi_ij.
    out.target.brownian = true;
    for (const auto& e : spec.entries)
      if (e.regime == KernelRegime::Summable) out.target.m_plus(e.i, e.j) += e.alpha;
    const Eigen::MatrixXd cov = out.target.m_plus * out.target.m_plus.transpose();
    MfbmParams params;
    params.H = Eigen::VectorXd::Constant(p, 0.5);
    params.sigma = cov.diagonal().cwiseSqrt();
    for (int i = 0; i < p; ++i)
      if (!(params.sigma(i) > 0.0)) throw std::domain_error("limit_target: component with zero limiting variance");
    params.rho = params.sigma.cwiseInverse().asDiagonal() * cov * params.sigma.cwiseInverse().asDiagonal();
    params.rho.diagonal().setOnes();
    params.eta = Eigen::MatrixXd::Zero(p, p);
    out.params = params;
    return out;
  }
  if (zero_rows > 0)
    throw std::domain_error("limit_target: rows with d_i = 0 mixed with rows with d_i != 0 are not supported");

  for (const auto& e : spec.entries) {
    const double di = out.target.d(e.i);
    if (std::abs(e.d - di) > kExponentTol) continue;
    // A minus-side kernel sums to (alpha/d)[(-x)_-^d - (1-x)_-^d], the negative of the
    // representation kernel, hence the sign.
    if (e.side == Side::Plus)
      out.target.m_plus(e.i, e.j) += e.alpha / di;
    else
      out.target.m_minus(e.i, e.j) -= e.alpha / di;
  }
  const Eigen::VectorXd H = out.target.d.array() + 0.5;
  out.params = params_from_ma({out.target.m_plus, out.target.m_minus}, H);
  return out;
}

}  // namespace mfbm
