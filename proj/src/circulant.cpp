#include "mfbm/circulant.hpp"

#include "mfbm/covariance.hpp"
#include "mfbm/errors.hpp"
#include "mfbm/existence.hpp"
#include "mfbm/fft.hpp"
#include "mfbm/rng.hpp"
#include "parallel.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace mfbm {

namespace {

constexpr double kNegativeEigTol = 1e-12;

bool is_power_of_two(std::int64_t x) { return x > 0 && (x & (x - 1)) == 0; }

void check_config(const SimulationConfig& config) {
  if (config.n < 1) throw std::invalid_argument("simulation: n must be positive");
  if (config.replicates < 1) throw std::invalid_argument("simulation: replicates must be positive");
  if (!(config.imag_tol >= 0.0)) throw std::invalid_argument("simulation: imag_tol must be nonnegative");
  if (config.eig_policy.kind == EigPolicy::Kind::GrowM && config.eig_policy.max_doublings < 0)
    throw std::invalid_argument("simulation: max_doublings must be nonnegative");
  if (config.m) {
    const std::int64_t m = *config.m;
    if (!is_power_of_two(m) || m < 2) throw std::invalid_argument("simulation: m must be a power of two >= 2");
    if (m <= 2 * (config.n - 1)) {
      std::ostringstream msg;
      msg << "simulation: m = " << m << " must exceed 2(n-1) = " << 2 * (config.n - 1);
      throw std::invalid_argument(msg.str());
    }
  }
}

struct Embedding {
  std::vector<Eigen::MatrixXd> c_blocks;
  std::vector<Eigen::MatrixXcd> b_blocks;
  double hermitian_defect = 0.0;
};

Embedding embed(const MfbmParams& params, std::int64_t m) {
  const Eigen::Index p = params.p();
  const std::int64_t half = m / 2;
  Embedding out;
  out.c_blocks.resize(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j <= half; ++j) {
    Eigen::MatrixXd g = lag_block(params, static_cast<double>(j), 1.0).block;
    if (j == half && j > 0) {
      out.c_blocks[static_cast<std::size_t>(j)] = 0.5 * (g + g.transpose());
    } else {
      out.c_blocks[static_cast<std::size_t>(j)] = g;
      if (j > 0) out.c_blocks[static_cast<std::size_t>(m - j)] = g.transpose();
    }
  }

  out.b_blocks.assign(static_cast<std::size_t>(m), Eigen::MatrixXcd(p, p));
  ComplexDft dft(static_cast<std::size_t>(m), ComplexDft::Direction::Forward);
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = 0; v < p; ++v) {
      for (std::int64_t j = 0; j < m; ++j) dft.data()[j] = out.c_blocks[static_cast<std::size_t>(j)](u, v);
      dft.execute();
      for (std::int64_t k = 0; k < m; ++k) out.b_blocks[static_cast<std::size_t>(k)](u, v) = dft.data()[k];
    }
  }
  for (auto& b : out.b_blocks) {
    out.hermitian_defect = std::max(out.hermitian_defect, (b - b.adjoint()).cwiseAbs().maxCoeff());
    b = 0.5 * (b + b.adjoint()).eval();
  }
  return out;
}

SamplePath draw_path(const CirculantPlan& plan, std::uint64_t seed, std::uint64_t replicate, bool integrate,
                     ComplexDft& dft, Eigen::MatrixXcd& w) {
  const Eigen::Index p = plan.params.p();
  const std::int64_t m = plan.m;
  const std::int64_t half = m / 2;
  NormalSource source(seed, replicate);

  // Step 4: Z(j) with E Z(j) Z(j)* = I/m and Z(m-j) = conj(Z(j)).
  Eigen::MatrixXcd z(p, m);
  const double edge_scale = 1.0 / std::sqrt(static_cast<double>(m));
  const double inner_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
  for (std::int64_t j = 0; j <= half; ++j) {
    if (j == 0 || j == half) {
      for (Eigen::Index u = 0; u < p; ++u) z(u, j) = edge_scale * source.normal();
    } else {
      Eigen::VectorXd re(p);
      for (Eigen::Index u = 0; u < p; ++u) re(u) = source.normal();
      for (Eigen::Index u = 0; u < p; ++u) {
        z(u, j) = inner_scale * std::complex<double>(re(u), source.normal());
        z(u, m - j) = std::conj(z(u, j));
      }
    }
  }
  for (std::int64_t j = 0; j < m; ++j) w.col(j).noalias() = plan.sqrt_blocks[static_cast<std::size_t>(j)] * z.col(j);

  // Step 5: forward DFT of each component.
  Eigen::MatrixXd out(plan.n, p);
  double max_imag = 0.0;
  for (Eigen::Index u = 0; u < p; ++u) {
    for (std::int64_t j = 0; j < m; ++j) dft.data()[j] = w(u, j);
    dft.execute();
    for (std::int64_t k = 0; k < m; ++k) max_imag = std::max(max_imag, std::abs(dft.data()[k].imag()));
    for (std::int64_t k = 0; k < plan.n; ++k) out(k, u) = dft.data()[k].real();
  }

  SamplePath path;
  path.meta.n = plan.n;
  path.meta.m = plan.m;
  path.meta.seed = seed;
  path.meta.replicate = replicate;
  path.meta.integrated = integrate;
  path.meta.exact = plan.exact;
  path.meta.truncated_mass = plan.truncated_mass;
  path.meta.max_imag_residual = max_imag / plan.path_scale;
  path.meta.generator = Philox4x32::kName;
  path.meta.method = "circulant";
  path.values = integrate ? integrate_increments(out) : std::move(out);
  return path;
}

void check_imag(const SamplePath& path, double imag_tol) {
  if (path.meta.max_imag_residual > imag_tol) {
    std::ostringstream msg;
    msg << "simulate: imaginary residual " << path.meta.max_imag_residual << " exceeds tolerance " << imag_tol
        << " (replicate " << path.meta.replicate << ")";
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

std::int64_t default_embedding_size(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("default_embedding_size: n must be positive");
  std::int64_t m = 2;
  while (m <= 2 * (n - 1)) m *= 2;
  return m;
}

CirculantPlan build_plan(const MfbmParams& params, const SimulationConfig& config) {
  check_config(config);
  const AdmissibilityReport report = is_admissible(params);
  if (!report.admissible) {
    std::ostringstream msg;
    msg << "build_plan: parameters do not define a mfBm (min eigenvalue of Q = " << report.min_eigenvalue << ")";
    throw ExistenceError(msg.str());
  }

  const Eigen::Index p = params.p();
  std::int64_t m = config.m ? *config.m : default_embedding_size(config.n);
  int doublings = 0;
  for (;;) {
    Embedding emb = embed(params, m);
    CirculantPlan plan;
    plan.params = params;
    plan.n = config.n;
    plan.m = m;
    plan.doublings = doublings;
    plan.hermitian_defect = emb.hermitian_defect;
    plan.eigenvalues.resize(static_cast<std::size_t>(m));
    plan.eigenvectors.resize(static_cast<std::size_t>(m));

    detail::parallel_for(static_cast<std::size_t>(m), config.threads, [&](std::size_t k, int) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(emb.b_blocks[k]);
      plan.eigenvalues[k] = solver.eigenvalues();
      plan.eigenvectors[k] = solver.eigenvectors();
    });

    double max_xi = 0.0;
    double min_xi = 0.0;
    for (const auto& xi : plan.eigenvalues) {
      max_xi = std::max(max_xi, xi.maxCoeff());
      min_xi = std::min(min_xi, xi.minCoeff());
    }
    plan.min_relative_eigenvalue = max_xi > 0.0 ? min_xi / max_xi : 0.0;
    const bool genuine_negative = min_xi < -kNegativeEigTol * max_xi;

    if (genuine_negative && config.eig_policy.kind != EigPolicy::Kind::Truncate) {
      if (config.eig_policy.kind == EigPolicy::Kind::GrowM && doublings < config.eig_policy.max_doublings) {
        m *= 2;
        ++doublings;
        continue;
      }
      std::ostringstream msg;
      msg << "build_plan: circulant embedding of size m = " << m << " has negative eigenvalues (min/max = "
          << plan.min_relative_eigenvalue << ")";
      throw EmbeddingError(msg.str());
    }

    plan.exact = !genuine_negative;
    plan.sqrt_blocks.resize(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < plan.eigenvalues.size(); ++k) {
      Eigen::VectorXd root(p);
      for (Eigen::Index u = 0; u < p; ++u) {
        const double xi = plan.eigenvalues[k](u);
        if (xi < 0.0) plan.truncated_mass += -xi;
        root(u) = std::sqrt(std::max(xi, 0.0));
      }
      const Eigen::MatrixXcd& r = plan.eigenvectors[k];
      plan.sqrt_blocks[k] = r * root.cast<std::complex<double>>().asDiagonal() * r.adjoint();
    }
    plan.c_blocks = std::move(emb.c_blocks);
    plan.b_blocks = std::move(emb.b_blocks);
    plan.path_scale = std::sqrt(plan.c_blocks[0].diagonal().maxCoeff());
    return plan;
  }
}

SamplePath simulate_replicate(const CirculantPlan& plan, std::uint64_t seed, std::uint64_t replicate, bool integrate) {
  ComplexDft dft(static_cast<std::size_t>(plan.m), ComplexDft::Direction::Forward);
  Eigen::MatrixXcd w(plan.params.p(), plan.m);
  return draw_path(plan, seed, replicate, integrate, dft, w);
}

std::vector<SamplePath> simulate(const CirculantPlan& plan, const SimulationConfig& config) {
  if (config.replicates < 1) throw std::invalid_argument("simulate: replicates must be positive");
  if (config.n != plan.n) throw std::invalid_argument("simulate: config.n differs from the n of the plan");
  const auto count = static_cast<std::size_t>(config.replicates);
  const int workers = detail::resolve_threads(config.threads, count);
  std::vector<std::unique_ptr<ComplexDft>> dfts;
  std::vector<Eigen::MatrixXcd> scratch;
  for (int w = 0; w < workers; ++w) {
    dfts.push_back(std::make_unique<ComplexDft>(static_cast<std::size_t>(plan.m), ComplexDft::Direction::Forward));
    scratch.emplace_back(plan.params.p(), plan.m);
  }
  std::vector<SamplePath> paths(count);
  detail::parallel_for(count, workers, [&](std::size_t r, int w) {
    paths[r] = draw_path(plan, config.seed, r, config.integrate, *dfts[static_cast<std::size_t>(w)],
                         scratch[static_cast<std::size_t>(w)]);
    check_imag(paths[r], config.imag_tol);
  });
  return paths;
}

Eigen::MatrixXd toeplitz_covariance(const MfbmParams& params, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("toeplitz_covariance: n must be positive");
  const Eigen::Index p = params.p();
  std::vector<Eigen::MatrixXd> g(static_cast<std::size_t>(n));
  for (std::int64_t h = 0; h < n; ++h) g[static_cast<std::size_t>(h)] = lag_block(params, static_cast<double>(h), 1.0).block;
  Eigen::MatrixXd out(n * p, n * p);
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      const std::int64_t lag = b - a;
      out.block(a * p, b * p, p, p) =
          lag >= 0 ? g[static_cast<std::size_t>(lag)] : Eigen::MatrixXd(g[static_cast<std::size_t>(-lag)].transpose());
    }
  }
  return out;
}

Eigen::MatrixXd embedded_block(const CirculantPlan& plan, std::int64_t n) {
  if (n < 1 || n > plan.m) throw std::invalid_argument("embedded_block: need 1 <= n <= m");
  const Eigen::Index p = plan.params.p();
  Eigen::MatrixXd out(n * p, n * p);
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      out.block(a * p, b * p, p, p) = plan.c_blocks[static_cast<std::size_t>(((b - a) % plan.m + plan.m) % plan.m)];
  return out;
}

std::vector<Eigen::MatrixXcd> inverse_dft_blocks(const CirculantPlan& plan) {
  const Eigen::Index p = plan.params.p();
  const std::int64_t m = plan.m;
  std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(m), Eigen::MatrixXcd(p, p));
  ComplexDft dft(static_cast<std::size_t>(m), ComplexDft::Direction::Backward);
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = 0; v < p; ++v) {
      for (std::int64_t k = 0; k < m; ++k) dft.data()[k] = plan.b_blocks[static_cast<std::size_t>(k)](u, v);
      dft.execute();
      for (std::int64_t j = 0; j < m; ++j) out[static_cast<std::size_t>(j)](u, v) = dft.data()[j] / static_cast<double>(m);
    }
  }
  return out;
}

std::vector<SamplePath> dense_oracle_simulate(const MfbmParams& params, std::int64_t n, std::uint64_t seed,
                                              int replicates) {
  if (n < 1 || n > kDenseOracleMaxN) throw std::invalid_argument("dense_oracle_simulate: n must be in [1, 64]");
  if (replicates < 1) throw std::invalid_argument("dense_oracle_simulate: replicates must be positive");
  require_valid(params);
  const Eigen::Index p = params.p();
  const Eigen::MatrixXd g = toeplitz_covariance(params, n);
  const Eigen::Index dim = g.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  double shift = 0.0;
  const double scale = g.diagonal().maxCoeff();
  while (llt.info() != Eigen::Success) {
    shift = shift == 0.0 ? 1e-12 * scale : 10.0 * shift;
    if (shift > 1e-6 * scale) throw ExistenceError("dense_oracle_simulate: covariance is not positive semidefinite");
    llt.compute(g + shift * Eigen::MatrixXd::Identity(dim, dim));
  }
  const Eigen::MatrixXd L = llt.matrixL();

  std::vector<SamplePath> paths(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    NormalSource source(seed, static_cast<std::uint64_t>(r));
    Eigen::VectorXd z(dim);
    for (Eigen::Index k = 0; k < dim; ++k) z(k) = source.normal();
    const Eigen::VectorXd x = L * z;
    SamplePath& path = paths[static_cast<std::size_t>(r)];
    path.values.resize(n, p);
    for (std::int64_t a = 0; a < n; ++a)
      for (Eigen::Index u = 0; u < p; ++u) path.values(a, u) = x(a * p + u);
    path.meta.n = n;
    path.meta.seed = seed;
    path.meta.replicate = static_cast<std::uint64_t>(r);
    path.meta.exact = shift == 0.0;
    path.meta.generator = Philox4x32::kName;
    path.meta.method = "dense_cholesky";
  }
  return paths;
}

Eigen::MatrixXd integrate_increments(const Eigen::MatrixXd& increments) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(increments.rows() + 1, increments.cols());
  for (Eigen::Index t = 0; t < increments.rows(); ++t) out.row(t + 1) = out.row(t) + increments.row(t);
  return out;
}

}  // namespace mfbm
