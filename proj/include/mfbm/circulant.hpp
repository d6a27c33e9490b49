#pragma once

#include "mfbm/params.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfbm {

/// What build_plan does when the embedding has negative eigenvalues.
struct EigPolicy {
  enum class Kind { Fail, GrowM, Truncate };

  Kind kind = Kind::GrowM;
  int max_doublings = 4;

  static EigPolicy fail() { return {Kind::Fail, 0}; }
  static EigPolicy grow(int max_doublings = 4) { return {Kind::GrowM, max_doublings}; }
  static EigPolicy truncate() { return {Kind::Truncate, 0}; }
};

struct SimulationConfig {
  std::int64_t n = 0;
  std::optional<std::int64_t> m;  ///< power of two above 2(n-1); smallest such if unset
  std::uint64_t seed = 0;
  int replicates = 1;
  EigPolicy eig_policy;
  double imag_tol = 1e-8;  ///< relative to the standard deviation of the noise
  bool integrate = false;  ///< return cumulative sums starting at 0
  int threads = 0;         ///< 0 means hardware concurrency
};

/// Smallest power of two strictly greater than 2(n - 1), and at least 2.
std::int64_t default_embedding_size(std::int64_t n);

/// Block circulant embedding of the increment covariance and its square root.
/// Immutable after build_plan; safe to share between threads.
struct CirculantPlan {
  MfbmParams params;
  std::int64_t n = 0;
  std::int64_t m = 0;
  int doublings = 0;                          ///< times m was doubled under GrowM
  std::vector<Eigen::MatrixXd> c_blocks;      ///< C(j), j = 0..m-1
  std::vector<Eigen::MatrixXcd> b_blocks;     ///< B(k) = sum_j C(j) e^{-2 pi i jk/m}
  std::vector<Eigen::VectorXd> eigenvalues;   ///< xi(k), ascending
  std::vector<Eigen::MatrixXcd> eigenvectors; ///< R(k), unitary
  std::vector<Eigen::MatrixXcd> sqrt_blocks;  ///< Hermitian square roots of the clipped B(k)
  double truncated_mass = 0.0;                ///< sum of |clipped eigenvalues|
  double min_relative_eigenvalue = 0.0;       ///< min xi / max xi before clipping
  double hermitian_defect = 0.0;              ///< max |B(k) - B(k)*| before symmetrization
  bool exact = true;                          ///< false only when Truncate clipped a genuine negative
  double path_scale = 1.0;                    ///< sqrt of the largest increment variance
};

/// Throws ExistenceError for inadmissible params, std::invalid_argument for a bad
/// config and EmbeddingError when the eigenvalue policy gives up.
CirculantPlan build_plan(const MfbmParams& params, const SimulationConfig& config);

struct PathMeta {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  bool integrated = false;
  bool exact = true;
  double truncated_mass = 0.0;
  double max_imag_residual = 0.0;  ///< relative to path_scale; 0 for the dense sampler
  std::string generator;
  std::string method;
};

struct SamplePath {
  Eigen::MatrixXd values;  ///< n x p increments, or (n+1) x p cumulated path with a zero first row
  PathMeta meta;
};

/// Draws config.replicates independent paths. Replicate r uses the substream
/// (config.seed, r), so results do not depend on the thread count.
std::vector<SamplePath> simulate(const CirculantPlan& plan, const SimulationConfig& config);

/// One replicate, reproducible on its own.
SamplePath simulate_replicate(const CirculantPlan& plan, std::uint64_t seed, std::uint64_t replicate, bool integrate);

/// The np x np covariance of (Delta X(0), ..., Delta X(n-1)), time-major:
/// entry (a p + u, b p + v) = gamma_uv(b - a, 1).
Eigen::MatrixXd toeplitz_covariance(const MfbmParams& params, std::int64_t n);

/// Top-left np x np block of the block circulant matrix with blocks C((b - a) mod m).
Eigen::MatrixXd embedded_block(const CirculantPlan& plan, std::int64_t n);

/// Inverse DFT of the B blocks, (1/m) sum_k B(k) e^{2 pi i jk/m}; should reproduce C(j).
std::vector<Eigen::MatrixXcd> inverse_dft_blocks(const CirculantPlan& plan);

inline constexpr std::int64_t kDenseOracleMaxN = 64;

/// Direct sampler through a Cholesky factor of toeplitz_covariance. Only for
/// n <= kDenseOracleMaxN; used to cross-check the circulant sampler.
std::vector<SamplePath> dense_oracle_simulate(const MfbmParams& params, std::int64_t n, std::uint64_t seed,
                                              int replicates);

/// Cumulative sums with X(0) = 0 prepended.
Eigen::MatrixXd integrate_increments(const Eigen::MatrixXd& increments);

}  // namespace mfbm
