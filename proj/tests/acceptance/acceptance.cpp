// Acceptance run: one PASS/FAIL line per criterion, nonzero exit status if any fails.
// Criterion numbers may be given on the command line to run a subset.

#include "mfbm/circulant.hpp"
#include "mfbm/covariance.hpp"
#include "mfbm/existence.hpp"
#include "mfbm/params.hpp"
#include "mfbm/representations.hpp"
#include "mfbm/spectral.hpp"
#include "mfbm/stats.hpp"
#include "mfbm/superlinear.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

using mfbm::MfbmParams;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<int> lags_upto(int max_lag) {
  std::vector<int> lags;
  for (int h = 0; h <= max_lag; ++h) lags.push_back(h);
  return lags;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
  return out;
}

Outcome max_correlation_value() {
  const double v = mfbm::max_correlation(0.1, 0.8, mfbm::SpecialCase::WellBalanced);
  return {std::abs(v - 0.514) <= 0.001, fmt("max_correlation(0.1, 0.8, well-balanced) = %.6f, expected 0.514 +- 0.001", v)};
}

Outcome existence_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> uh(0.01, 0.99), ur(-1.0, 1.0), ue(-1.5, 1.5), u01(0.0, 1.0);
  int disagreements = 0, in_band = 0, admissible = 0, unit_sum = 0;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    const double H1 = uh(rng);
    const bool unit = u01(rng) < 0.1;
    const double H2 = unit ? 1.0 - H1 : uh(rng);
    const double rho = ur(rng);
    const double eta_prime = ue(rng);
    // For H1 + H2 = 1 the eta' coordinate is eta~ itself.
    const bool unit_kind = mfbm::pair_kind(H1, H2) == mfbm::PairKind::UnitSum;
    const double eta = unit_kind ? eta_prime : mfbm::eta_from_reparam(H1, H2, eta_prime);
    const MfbmParams p = mfbm::pair_params(H1, H2, rho, eta);
    if (unit_kind) ++unit_sum;
    const double c = mfbm::coherence(p, 0, 1);
    if (std::abs(c - 1.0) <= 1e-9) {
      ++in_band;
      continue;
    }
    const bool eig = mfbm::is_admissible(p).admissible;
    if (eig) ++admissible;
    if (eig != (c <= 1.0)) ++disagreements;
  }
  return {disagreements == 0,
          fmt("%d draws (%d with H1+H2=1), %d admissible, %d in the 1e-9 band, %d disagreements", draws, unit_sum,
              admissible, in_band, disagreements)};
}

Outcome embedding_exactness() {
  std::mt19937_64 rng(77);
  const int dims[] = {1, 2, 3, 5};
  double worst_block = 0.0, worst_idft = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int p = dims[k % 4];
    const MfbmParams params = oracle::random_admissible(rng, p);
    mfbm::SimulationConfig config;
    config.n = 64;
    config.eig_policy = mfbm::EigPolicy::truncate();  // exactness of C does not depend on its spectrum
    const auto plan = mfbm::build_plan(params, config);
    // Reference built from the mfBm covariance Sigma(s, t) in long double, not from the lag-block code.
    Eigen::MatrixXd g(64 * p, 64 * p);
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b)
        for (int u = 0; u < p; ++u)
          for (int v = 0; v < p; ++v) g(a * p + u, b * p + v) = oracle::increment_cov_long_double(params, u, v, b - a, 1.0);
    worst_block = std::max(worst_block, max_abs(mfbm::embedded_block(plan, 64) - g) / max_abs(g));
    const auto c = mfbm::inverse_dft_blocks(plan);
    double scale = 0.0, err = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      scale = std::max(scale, max_abs(plan.c_blocks[j]));
      err = std::max(err, (c[j] - plan.c_blocks[j].cast<std::complex<double>>()).cwiseAbs().maxCoeff());
    }
    worst_idft = std::max(worst_idft, err / scale);
  }
  return {worst_block <= 1e-12 && worst_idft <= 1e-10,
          fmt("20 sets, p in {1,2,3,5}, n=64: block error %.2e (<= 1e-12), inverse DFT error %.2e (<= 1e-10)",
              worst_block, worst_idft)};
}

Outcome simulator_law() {
  MfbmParams base = mfbm::pair_params(0.3, 0.7, 0.3, 0.0);
  const MfbmParams causal = mfbm::special_case_eta(base, mfbm::SpecialCase::Causal);
  const auto lags = lags_upto(20);
  bool pass = true;
  std::string detail;
  int variant = 0;
  for (const MfbmParams& params : {base, causal}) {
    mfbm::SimulationConfig config;
    config.n = 32;
    config.replicates = 5000;
    config.seed = 4000 + static_cast<std::uint64_t>(variant);
    const auto plan = mfbm::build_plan(params, config);
    const auto paths = mfbm::simulate(plan, config);
    const auto report = mfbm::compare_report(paths, params, lags);
    const auto dense = mfbm::dense_oracle_simulate(params, 32, 9000 + static_cast<std::uint64_t>(variant), 5000);
    const auto cross = mfbm::compare_ensembles(paths, dense, lags);
    const bool ok = report.summary.fraction_over <= 0.005 && cross.summary.max_abs_z <= 5.0;
    pass = pass && ok;
    detail += fmt("%s%s: fraction |z|>4 = %.4f over %zu cells (max |z| %.2f), circulant vs dense max |z| = %.2f",
                  variant ? "; " : "", variant ? "causal" : "eta=0", report.summary.fraction_over,
                  report.summary.cells, report.summary.max_abs_z, cross.summary.max_abs_z);
    ++variant;
  }
  return {pass, detail};
}

Outcome white_noise() {
  const MfbmParams params =
      mfbm::independent_params(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Ones(1));
  mfbm::SimulationConfig config;
  config.n = 1024;
  config.replicates = 200;
  config.seed = 55;
  const auto paths = mfbm::simulate(mfbm::build_plan(params, config), config);
  const double var = mfbm::empirical_cross_cov(paths, 0, 0, 0).estimate;
  const double gate = 4.0 / std::sqrt(1024.0 * 200.0);
  double worst = 0.0;
  for (int h = 1; h <= 10; ++h)
    worst = std::max(worst, std::abs(mfbm::empirical_cross_cov(paths, 0, 0, h).estimate / var));
  return {worst <= gate, fmt("max |autocorrelation| over lags 1-10 = %.2e, gate 4/sqrt(nR) = %.2e", worst, gate)};
}

Outcome representation_round_trip() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int p = 2 + k % 3;
    const MfbmParams params = oracle::random_admissible(rng, p, 0.02, 0.98, true);
    const auto A = mfbm::a_from_params(params);
    const auto M = mfbm::ma_from_a(A, params.H);
    const MfbmParams back = mfbm::params_from_ma(M, params.H);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    for (Eigen::Index i = 0; i < p; ++i) {
      worst = std::max(worst, std::abs(back.sigma(i) - params.sigma(i)) / params.sigma(i));
      for (Eigen::Index j = 0; j < p; ++j) {
        worst = std::max(worst, rel(params.rho(i, j), back.rho(i, j)));
        worst = std::max(worst, rel(params.eta(i, j), back.eta(i, j)));
      }
    }
  }
  return {worst <= 1e-8, fmt("100 draws, p in {2,3,4}, |H-1/2| >= 0.05: worst relative error %.2e (<= 1e-8)", worst)};
}

Outcome spectral_consistency() {
  const MfbmParams sets[] = {mfbm::pair_params(0.2, 0.4, 0.4, 0.3),   // H1+H2 < 1
                             mfbm::pair_params(0.3, 0.7, 0.4, 0.2),   // H1+H2 = 1 (rho~, eta~)
                             mfbm::pair_params(0.6, 0.8, 0.5, -0.4)};  // H1+H2 > 1
  bool pass = true;
  double worst_ratio = 0.0, worst_coh = 0.0;
  for (const MfbmParams& p : sets) {
    if (!mfbm::is_admissible(p).admissible) return {false, "a test parameter set is not admissible"};
    for (double omega : {0.3, 0.5, 1.0}) {
      for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{0, 0}, std::pair{1, 1}}) {
        const auto quad = oracle::fourier_of_increment_cov(
            [&](double h) { return mfbm::increment_cov(p, i, j, h, 1.0); }, omega, 1.0, 1e5);
        const double err = std::abs(quad.value - mfbm::cross_spectral_density(p, i, j, omega, 1.0));
        worst_ratio = std::max(worst_ratio, err / quad.error_bound);
        pass = pass && err <= quad.error_bound;
      }
    }
    const double c = mfbm::coherence(p, 0, 1);
    for (double omega : logspace(1e-3, 1e2, 50)) {
      const auto s12 = mfbm::cross_spectral_density(p, 0, 1, omega, 1.0);
      const double s11 = mfbm::cross_spectral_density(p, 0, 0, omega, 1.0).real();
      const double s22 = mfbm::cross_spectral_density(p, 1, 1, omega, 1.0).real();
      worst_coh = std::max(worst_coh, std::abs(std::norm(s12) / (s11 * s22) - c));
    }
  }
  pass = pass && worst_coh <= 1e-10;
  return {pass, fmt("3 sets x 3 frequencies x 4 pairs, L=1e5: worst |error| / bound = %.3f; coherence spread %.2e (<= 1e-10)",
                    worst_ratio, worst_coh)};
}

Outcome asymptotic_decay() {
  const MfbmParams sets[] = {mfbm::pair_params(0.2, 0.3, 0.5, 0.2),   // H1+H2 = 0.5
                             mfbm::pair_params(0.3, 0.7, 0.4, 0.3),   // H1+H2 = 1, kappa = eta~ sign h / 2
                             mfbm::pair_params(0.7, 0.8, 0.6, -0.3)};  // H1+H2 = 1.5
  double worst = 0.0;
  for (const MfbmParams& p : sets) {
    const double alpha = p.H(0) + p.H(1);
    for (int s : {1, -1}) {
      const double kappa = mfbm::asymptotic_kappa(p, 0, 1, s);
      if (kappa == 0.0) return {false, "kappa vanished for a test set"};
      const double predicted = p.sigma(0) * p.sigma(1) * std::pow(1e4, alpha - 2.0) * kappa;
      worst = std::max(worst, std::abs(mfbm::increment_cov(p, 0, 1, s * 1e4, 1.0) / predicted - 1.0));
    }
  }
  return {worst <= 0.02, fmt("3 sets, h = +-1e4: worst |ratio - 1| = %.2e (<= 0.02)", worst)};
}

Outcome limit_theorem() {
  mfbm::KernelSpec spec;
  spec.p = 1;
  spec.truncation_factor = 16;
  spec.entries = {{0, 0, mfbm::Side::Plus, mfbm::KernelRegime::PowerPos, 0.2, 1.0}};
  const auto limit = mfbm::limit_target(spec);
  const double target = limit.params.sigma(0) * limit.params.sigma(0);
  std::vector<double> err, se;
  std::string detail = fmt("target sigma^2 = %.4f;", target);
  for (std::int64_t n = 512; n <= 4096; n *= 2) {
    const auto e = mfbm::simulate_partial_sums(spec, mfbm::NoiseLaw::Gaussian, n, {1.0},
                                               1000 + static_cast<std::uint64_t>(n), 2000);
    const auto est = mfbm::empirical_partial_sum_cov(e, 0, 0, 0);
    const double exact = mfbm::partial_sum_cov_exact(spec, n, 1.0, 1.0)(0, 0);
    err.push_back(est.estimate / target - 1.0);
    se.push_back(est.std_error / target);
    detail += fmt(" n=%lld: %+.4f +- %.4f (exact %+.4f)", static_cast<long long>(n), err.back(), se.back(),
                  exact / target - 1.0);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < err.size(); ++k)
    monotone = monotone &&
               std::abs(err[k]) <= std::abs(err[k - 1]) + 2.0 * std::sqrt(se[k] * se[k] + se[k - 1] * se[k - 1]);
  const bool pass = std::abs(err.back()) <= 0.10 && monotone;
  return {pass, detail + (monotone ? "; shrinking within MC bars" : "; NOT shrinking within MC bars")};
}

Outcome cost_scaling() {
  const MfbmParams params = mfbm::pair_params(0.3, 0.7, 0.3, 0.1);
  std::vector<double> x, y;
  std::string detail;
  for (int e = 10; e <= 16; ++e) {
    const std::int64_t m = std::int64_t{1} << e;
    mfbm::SimulationConfig config;
    config.n = m / 2;
    config.m = m;
    config.replicates = 1;
    config.threads = 1;
    config.eig_policy = mfbm::EigPolicy::truncate();
    const int repeats = e <= 13 ? 9 : 5;
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
      config.seed = static_cast<std::uint64_t>(r);
      const auto start = std::chrono::steady_clock::now();
      const auto plan = mfbm::build_plan(params, config);
      const auto paths = mfbm::simulate(plan, config);
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (paths.empty()) return {false, "simulate returned nothing"};
      best = std::min(best, t);
    }
    x.push_back(std::log(static_cast<double>(m)));
    y.push_back(std::log(best));
    detail += fmt("%s2^%d: %.2f ms", e == 10 ? "" : ", ", e, 1e3 * best);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  const double slope = sxy / sxx;
  return {slope >= 0.95 && slope <= 1.3, fmt("log-log slope %.3f in [0.95, 1.3] (%s)", slope, detail.c_str())};
}

Outcome boundary_curves() {
  const std::pair<double, double> pairs[] = {{0.1, 0.8}, {0.3, 0.7}, {0.5, 0.5}};
  const int points = 400;
  double worst_c = 0.0, worst_intercept = 0.0, worst_gap = 0.0;
  for (auto [H1, H2] : pairs) {
    const auto curve = mfbm::admissible_boundary(H1, H2, points);
    for (const auto& b : curve) {
      const MfbmParams p = mfbm::params_from_boundary_point(H1, H2, b);
      worst_c = std::max(worst_c, std::abs(mfbm::coherence(p, 0, 1) - 1.0));
    }
    // Closed: consecutive points, including last to first, are close compared with the curve's size.
    double size = 0.0, gap = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const auto& a = curve[k];
      const auto& b = curve[(k + 1) % curve.size()];
      size = std::max(size, std::hypot(a.rho, a.eta_prime));
      gap = std::max(gap, std::hypot(a.rho - b.rho, a.eta_prime - b.eta_prime));
    }
    worst_gap = std::max(worst_gap, gap / size);
    const double mc = mfbm::max_correlation(H1, H2, mfbm::SpecialCase::WellBalanced);
    const auto& right = curve.front();
    const auto& left = curve[points / 2];
    worst_intercept = std::max({worst_intercept, std::abs(right.rho - mc), std::abs(left.rho + mc),
                                std::abs(right.eta_prime), std::abs(left.eta_prime)});
  }
  const bool pass = worst_c <= 1e-8 && worst_intercept <= 1e-10 && worst_gap <= 0.05;
  return {pass, fmt("3 curves x %d points: max |C-1| = %.2e (<= 1e-8), eta'=0 intercept error %.2e, largest step %.3f of radius",
                    points, worst_c, worst_intercept, worst_gap)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"maximal correlation", max_correlation_value},
      {"existence equivalence", existence_equivalence},
      {"embedding exactness", embedding_exactness},
      {"simulator law", simulator_law},
      {"white-noise degeneration", white_noise},
      {"representation round trip", representation_round_trip},
      {"spectral consistency", spectral_consistency},
      {"asymptotic decay", asymptotic_decay},
      {"limit theorem", limit_theorem},
      {"cost scaling", cost_scaling},
      {"boundary curves", boundary_curves},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
