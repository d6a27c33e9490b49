#pragma once

#include "mfbm/circulant.hpp"
#include "mfbm/params.hpp"
#include "mfbm/superlinear.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace mfbm::io {

// Parameter files: {"p": 2, "H": [...], "sigma": [...], "rho": [[...]], "eta": [[...]]}.
// For pairs with H_i + H_j = 1 the rho/eta entries are read as rho~/eta~.
MfbmParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const MfbmParams& params);
MfbmParams read_params(const std::filesystem::path& file);

// Kernel files: {"p", "truncation_factor" | "truncation", "noise", "shape",
//   "kernels": [{"i", "j", "side": "+"|"-", "regime", "d", "alpha"}]} with 1-based i, j.
struct KernelFile {
  KernelSpec spec;
  NoiseLaw noise = NoiseLaw::Gaussian;
};
KernelFile kernels_from_json(const nlohmann::json& j);
KernelFile read_kernels(const std::filesystem::path& file);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// CSV with header t,X_1..X_p. Increment rows are numbered t = 1..n; cumulated
/// paths start at t = 0.
void write_path_csv(const std::filesystem::path& file, const SamplePath& path);
SamplePath read_path_csv(const std::filesystem::path& file);

nlohmann::json read_json(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

}  // namespace mfbm::io
