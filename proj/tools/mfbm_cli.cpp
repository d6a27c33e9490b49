#include "mfbm/circulant.hpp"
#include "mfbm/covariance.hpp"
#include "mfbm/errors.hpp"
#include "mfbm/existence.hpp"
#include "mfbm/io.hpp"
#include "mfbm/params.hpp"
#include "mfbm/representations.hpp"
#include "mfbm/spectral.hpp"
#include "mfbm/stats.hpp"
#include "mfbm/superlinear.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Writes to the named file, or to stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& name) {
    if (!name.empty() && name != "-") {
      if (fs::path(name).has_parent_path()) fs::create_directories(fs::path(name).parent_path());
      file_ = std::make_unique<std::ofstream>(name);
      if (!*file_) throw std::runtime_error("cannot open " + name + " for writing");
    }
    stream().precision(std::numeric_limits<double>::max_digits10);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (double e : linspace(std::log10(lo), std::log10(hi), count)) out.push_back(std::pow(10.0, e));
  return out;
}

std::vector<int> lag_range(int max_lag) {
  std::vector<int> lags;
  for (int h = 0; h <= max_lag; ++h) lags.push_back(h);
  return lags;
}

mfbm::EigPolicy policy_from_name(const std::string& name, int max_doublings) {
  if (name == "fail") return mfbm::EigPolicy::fail();
  if (name == "grow") return mfbm::EigPolicy::grow(max_doublings);
  return mfbm::EigPolicy::truncate();
}

std::string policy_name(const mfbm::EigPolicy& policy) {
  switch (policy.kind) {
    case mfbm::EigPolicy::Kind::Fail: return "fail";
    case mfbm::EigPolicy::Kind::GrowM: return "grow";
    case mfbm::EigPolicy::Kind::Truncate: return "truncate";
  }
  return "unknown";
}

json complex_part(const Eigen::MatrixXcd& m, bool imaginary) {
  return mfbm::io::matrix_to_json(imaginary ? Eigen::MatrixXd(m.imag()) : Eigen::MatrixXd(m.real()));
}

int run_covariance(const std::string& params_file, int lag_min, int lag_max, double delta, const std::string& out) {
  const mfbm::MfbmParams params = mfbm::io::read_params(params_file);
  Output o(out);
  o.stream() << "i,j,h,delta,gamma\n";
  for (Eigen::Index i = 0; i < params.p(); ++i)
    for (Eigen::Index j = 0; j < params.p(); ++j)
      for (int h = lag_min; h <= lag_max; ++h)
        o.stream() << i + 1 << ',' << j + 1 << ',' << h << ',' << delta << ','
                   << mfbm::increment_cov(params, i, j, h, delta) << '\n';
  return 0;
}

int run_spectrum(const std::string& params_file, double omega_min, double omega_max, int count, double delta,
                 const std::string& out) {
  const mfbm::MfbmParams params = mfbm::io::read_params(params_file);
  Output o(out);
  o.stream() << "i,j,omega,delta,re_S,im_S,coherence\n";
  for (Eigen::Index i = 0; i < params.p(); ++i) {
    for (Eigen::Index j = 0; j < params.p(); ++j) {
      const double coh = i == j ? 1.0 : mfbm::coherence(params, i, j);
      for (double omega : logspace(omega_min, omega_max, count)) {
        const auto s = mfbm::cross_spectral_density(params, i, j, omega, delta);
        o.stream() << i + 1 << ',' << j + 1 << ',' << omega << ',' << delta << ',' << s.real() << ',' << s.imag()
                   << ',' << coh << '\n';
      }
    }
  }
  return 0;
}

struct CheckOptions {
  std::string params;
  bool boundary = false;
  bool max_corr_grid = false;
  double H1 = 0.3;
  double H2 = 0.7;
  int points = 400;
  int grid = 99;
  std::string special_case = "well-balanced";
  std::string out;
};

int run_check(const CheckOptions& opt) {
  if (opt.boundary) {
    Output o(opt.out);
    o.stream() << "rho,eta_prime\n";
    for (const auto& b : mfbm::admissible_boundary(opt.H1, opt.H2, opt.points))
      o.stream() << b.rho << ',' << b.eta_prime << '\n';
    return 0;
  }
  if (opt.max_corr_grid) {
    const auto special = opt.special_case == "causal" ? mfbm::SpecialCase::Causal : mfbm::SpecialCase::WellBalanced;
    Output o(opt.out);
    o.stream() << "H1,H2,max_rho\n";
    const std::vector<double> hs = linspace(1.0 / (opt.grid + 1), 1.0 - 1.0 / (opt.grid + 1), opt.grid);
    for (double h1 : hs)
      for (double h2 : hs) o.stream() << h1 << ',' << h2 << ',' << mfbm::max_correlation(h1, h2, special) << '\n';
    return 0;
  }
  if (opt.params.empty()) throw CLI::ValidationError("check", "--params is required without --boundary or --max-corr-grid");
  const mfbm::MfbmParams params = mfbm::io::read_params(opt.params);
  const auto report = mfbm::is_admissible(params);
  json j;
  j["admissible"] = report.admissible;
  j["min_eigenvalue"] = report.min_eigenvalue;
  j["max_abs_entry"] = report.max_abs_entry;
  if (report.coherence12) j["coherence_12"] = *report.coherence12;
  Output o(opt.out);
  o.stream() << j.dump(2) << '\n';
  return report.admissible ? 0 : 1;
}

int run_represent(const std::string& params_file, const std::string& out) {
  const mfbm::MfbmParams params = mfbm::io::read_params(params_file);
  const auto A = mfbm::a_from_params(params);
  json j;
  j["A_re"] = complex_part(A.entries, false);
  j["A_im"] = complex_part(A.entries, true);
  j["cholesky_shift"] = A.cholesky_shift;
  const bool singular = (params.H.array() - 0.5).abs().minCoeff() < 1e-12;
  if (singular) {
    // The moving-average form is not identifiable when some H_i = 1/2.
    j["M_plus"] = nullptr;
    j["M_minus"] = nullptr;
  } else {
    const auto M = mfbm::ma_from_a(A, params.H);
    j["M_plus"] = mfbm::io::matrix_to_json(M.m_plus);
    j["M_minus"] = mfbm::io::matrix_to_json(M.m_minus);
  }
  Output o(out);
  o.stream() << j.dump(2) << '\n';
  return 0;
}

struct SimulateOptions {
  std::string params;
  std::int64_t n = 1024;
  int replicates = 1;
  std::uint64_t seed = 0;
  std::int64_t m = 0;
  bool integrate = false;
  std::string eig_policy = "grow";
  int max_doublings = 4;
  int threads = 0;
  std::string out;
};

int run_simulate(const SimulateOptions& opt) {
  const mfbm::MfbmParams params = mfbm::io::read_params(opt.params);
  mfbm::SimulationConfig config;
  config.n = opt.n;
  if (opt.m > 0) config.m = opt.m;
  config.seed = opt.seed;
  config.replicates = opt.replicates;
  config.eig_policy = policy_from_name(opt.eig_policy, opt.max_doublings);
  config.integrate = opt.integrate;
  config.threads = opt.threads;

  const auto start = std::chrono::steady_clock::now();
  const auto plan = mfbm::build_plan(params, config);
  const auto paths = mfbm::simulate(plan, config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  json files = json::array();
  double max_imag = 0.0;
  for (std::size_t r = 0; r < paths.size(); ++r) {
    char name[32];
    std::snprintf(name, sizeof name, "replicate_%04zu.csv", r);
    mfbm::io::write_path_csv(dir / name, paths[r]);
    files.push_back(name);
    max_imag = std::max(max_imag, paths[r].meta.max_imag_residual);
  }

  json manifest;
  manifest["config"] = {{"params", mfbm::io::params_to_json(params)},
                        {"n", opt.n},
                        {"replicates", opt.replicates},
                        {"seed", opt.seed},
                        {"m_requested", opt.m > 0 ? json(opt.m) : json(nullptr)},
                        {"integrate", opt.integrate},
                        {"eig_policy", policy_name(config.eig_policy)},
                        {"max_doublings", config.eig_policy.max_doublings},
                        {"threads", opt.threads}};
  manifest["m"] = plan.m;
  manifest["doublings"] = plan.doublings;
  manifest["truncated_mass"] = plan.truncated_mass;
  manifest["exact"] = plan.exact;
  manifest["min_relative_eigenvalue"] = plan.min_relative_eigenvalue;
  manifest["max_imag_residual"] = max_imag;
  manifest["wall_time_seconds"] = wall;
  if (!paths.empty()) {
    manifest["generator"] = paths.front().meta.generator;
    manifest["method"] = paths.front().meta.method;
  }
  manifest["files"] = files;
  mfbm::io::write_json(dir / "manifest.json", manifest);
  std::cerr << "wrote " << paths.size() << " paths to " << dir.string() << " (m = " << plan.m
            << (plan.exact ? "" : ", approximate") << ")\n";
  return 0;
}

struct VerifyOptions {
  std::string dir;
  std::string params;
  int max_lag = 20;
  double z_gate = 4.0;
  double budget = 0.005;
  std::string out;
};

int run_verify(const VerifyOptions& opt) {
  const mfbm::MfbmParams params = mfbm::io::read_params(opt.params);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<mfbm::SamplePath> paths;
  for (const auto& f : files) paths.push_back(mfbm::io::read_path_csv(f));
  if (paths.empty()) throw std::runtime_error("no CSV paths found in " + opt.dir);

  const auto report = mfbm::compare_report(paths, params, lag_range(opt.max_lag), 1.0, opt.z_gate);
  Output o(opt.out);
  o.stream() << "lag,i,j,empirical,theoretical,stderr,z,n_replicates\n";
  for (const auto& c : report.cells)
    o.stream() << c.lag << ',' << c.i + 1 << ',' << c.j + 1 << ',' << c.empirical << ',' << c.theoretical << ','
               << c.std_error << ',' << c.z << ',' << c.n_replicates << '\n';
  const bool pass = report.summary.fraction_over <= opt.budget;
  std::cerr << report.summary.cells << " cells, max |z| = " << report.summary.max_abs_z
            << ", fraction |z| > " << opt.z_gate << " = " << report.summary.fraction_over << ": "
            << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : 1;
}

struct LimitsOptions {
  std::string kernels;
  std::vector<std::int64_t> n{512, 1024};
  std::vector<double> tau{0.25, 0.5, 1.0};
  int replicates = 2000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

int run_limits(const LimitsOptions& opt) {
  const auto file = mfbm::io::read_kernels(opt.kernels);
  const auto limit = mfbm::limit_target(file.spec);
  const int p = file.spec.p;
  Output o(opt.out);
  o.stream() << "n,tau,component_i,component_j,empirical_cov,target_cov,mc_stderr\n";
  for (std::int64_t n : opt.n) {
    const auto ensemble =
        mfbm::simulate_partial_sums(file.spec, file.noise, n, opt.tau, opt.seed, opt.replicates, opt.threads);
    for (std::size_t k = 0; k < opt.tau.size(); ++k) {
      for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
          const auto est = mfbm::empirical_partial_sum_cov(ensemble, k, i, j);
          const double target = mfbm::mfbm_cov(limit.params, i, j, opt.tau[k], opt.tau[k]);
          o.stream() << n << ',' << opt.tau[k] << ',' << i + 1 << ',' << j + 1 << ',' << est.estimate << ','
                     << target << ',' << est.std_error << '\n';
        }
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate fractional Brownian motion: covariances, existence checks and simulation"};
  app.require_subcommand(1);

  std::string params_file, out;
  int lag_min = -10, lag_max = 10;
  double delta = 1.0;
  auto* cov = app.add_subcommand("covariance", "Increment cross-covariances gamma_ij(h, delta) as CSV");
  cov->add_option("--params", params_file, "Parameter JSON file")->required()->check(CLI::ExistingFile);
  cov->add_option("--lag-min", lag_min, "Smallest lag");
  cov->add_option("--lag-max", lag_max, "Largest lag");
  cov->add_option("--delta", delta, "Increment step")->check(CLI::PositiveNumber);
  cov->add_option("--out", out, "Output CSV (stdout if omitted)");

  double omega_min = 1e-3, omega_max = 10.0;
  int omega_count = 50;
  auto* spectrum = app.add_subcommand("spectrum", "Cross-spectral densities and coherences as CSV");
  spectrum->add_option("--params", params_file, "Parameter JSON file")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--omega-min", omega_min, "Lowest frequency")->check(CLI::PositiveNumber);
  spectrum->add_option("--omega-max", omega_max, "Highest frequency")->check(CLI::PositiveNumber);
  spectrum->add_option("--count", omega_count, "Number of log-spaced frequencies")->check(CLI::PositiveNumber);
  spectrum->add_option("--delta", delta, "Increment step")->check(CLI::PositiveNumber);
  spectrum->add_option("--out", out, "Output CSV (stdout if omitted)");

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "Admissibility test (exit 1 when not admissible), boundary or max-correlation grid");
  check->add_option("--params", check_opt.params, "Parameter JSON file")->check(CLI::ExistingFile);
  check->add_flag("--boundary", check_opt.boundary, "Emit the admissible boundary in the (rho, eta') plane");
  check->add_flag("--max-corr-grid", check_opt.max_corr_grid, "Emit the maximal correlation over an (H1, H2) grid");
  check->add_option("--H1", check_opt.H1, "First Hurst exponent for --boundary")->check(CLI::Range(0.0, 1.0));
  check->add_option("--H2", check_opt.H2, "Second Hurst exponent for --boundary")->check(CLI::Range(0.0, 1.0));
  check->add_option("--points", check_opt.points, "Boundary points")->check(CLI::PositiveNumber);
  check->add_option("--grid", check_opt.grid, "Grid size per axis")->check(CLI::PositiveNumber);
  check->add_option("--case", check_opt.special_case, "well-balanced or causal")
      ->check(CLI::IsMember({"well-balanced", "causal"}));
  check->add_option("--out", check_opt.out, "Output file (stdout if omitted)");

  auto* rep = app.add_subcommand("represent", "Spectral and moving-average coefficient matrices as JSON");
  rep->add_option("--params", params_file, "Parameter JSON file")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", out, "Output JSON (stdout if omitted)");

  SimulateOptions sim_opt;
  auto* sim = app.add_subcommand("simulate", "Exact circulant-embedding simulation of increments");
  sim->add_option("--params", sim_opt.params, "Parameter JSON file")->required()->check(CLI::ExistingFile);
  sim->add_option("--n", sim_opt.n, "Number of increments")->check(CLI::PositiveNumber);
  sim->add_option("--replicates", sim_opt.replicates, "Independent replicates")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_opt.seed, "Random seed");
  sim->add_option("--m", sim_opt.m, "Embedding size (power of two above 2(n-1))");
  sim->add_flag("--integrate", sim_opt.integrate, "Write cumulated paths starting at 0");
  sim->add_option("--eig-policy", sim_opt.eig_policy, "fail, grow or truncate")
      ->check(CLI::IsMember({"fail", "grow", "truncate"}));
  sim->add_option("--max-doublings", sim_opt.max_doublings, "Doublings of m allowed by --eig-policy grow");
  sim->add_option("--threads", sim_opt.threads, "Worker threads (0 = all cores)");
  sim->add_option("--out", sim_opt.out, "Output directory")->required();

  VerifyOptions ver_opt;
  auto* ver = app.add_subcommand("verify", "Compare simulated paths with the theoretical covariances");
  ver->add_option("--dir", ver_opt.dir, "Directory of path CSVs")->required()->check(CLI::ExistingDirectory);
  ver->add_option("--params", ver_opt.params, "Parameter JSON file")->required()->check(CLI::ExistingFile);
  ver->add_option("--max-lag", ver_opt.max_lag, "Lags 0..max-lag are compared")->check(CLI::NonNegativeNumber);
  ver->add_option("--z-gate", ver_opt.z_gate, "Cells with |z| above this count as exceedances");
  ver->add_option("--budget", ver_opt.budget, "Largest allowed fraction of exceedances");
  ver->add_option("--out", ver_opt.out, "Output CSV (stdout if omitted)");

  LimitsOptions lim_opt;
  auto* lim = app.add_subcommand("limits", "Partial sums of superlinear processes against their mfBm limit");
  lim->add_option("--kernels", lim_opt.kernels, "Kernel JSON file")->required()->check(CLI::ExistingFile);
  lim->add_option("--n", lim_opt.n, "Sample sizes")->delimiter(',');
  lim->add_option("--tau", lim_opt.tau, "Time points in [0, 1]")->delimiter(',');
  lim->add_option("--replicates", lim_opt.replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  lim->add_option("--seed", lim_opt.seed, "Random seed");
  lim->add_option("--threads", lim_opt.threads, "Worker threads (0 = all cores)");
  lim->add_option("--out", lim_opt.out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cov) return run_covariance(params_file, lag_min, lag_max, delta, out);
    if (*spectrum) return run_spectrum(params_file, omega_min, omega_max, omega_count, delta, out);
    if (*check) return run_check(check_opt);
    if (*rep) return run_represent(params_file, out);
    if (*sim) return run_simulate(sim_opt);
    if (*ver) return run_verify(ver_opt);
    if (*lim) return run_limits(lim_opt);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const mfbm::ExistenceError& e) {
    std::cerr << "not admissible: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
