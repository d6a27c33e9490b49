#include "mfbm/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mfbm::io {

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* name, Eigen::Index p) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != p)
    throw std::invalid_argument(std::string("params: '") + name + "' must be an array of length p");
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw std::invalid_argument("expected a nested array matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix rows must have equal length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

MfbmParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("params: expected a JSON object");
  for (const char* key : {"p", "H", "sigma", "rho", "eta"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("params: missing key '") + key + "'");
  const auto p = j.at("p").get<Eigen::Index>();
  if (p < 1) throw std::invalid_argument("params: p must be positive");
  MfbmParams params;
  params.H = vector_from_json(j.at("H"), "H", p);
  params.sigma = vector_from_json(j.at("sigma"), "sigma", p);
  params.rho = matrix_from_json(j.at("rho"));
  params.eta = matrix_from_json(j.at("eta"));
  if (params.rho.rows() != p || params.rho.cols() != p || params.eta.rows() != p || params.eta.cols() != p)
    throw std::invalid_argument("params: rho and eta must be p x p");
  require_valid(params);
  return params;
}

nlohmann::json params_to_json(const MfbmParams& params) {
  nlohmann::json j;
  j["p"] = params.p();
  j["H"] = std::vector<double>(params.H.data(), params.H.data() + params.H.size());
  j["sigma"] = std::vector<double>(params.sigma.data(), params.sigma.data() + params.sigma.size());
  j["rho"] = matrix_to_json(params.rho);
  j["eta"] = matrix_to_json(params.eta);
  return j;
}

nlohmann::json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(file.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

MfbmParams read_params(const std::filesystem::path& file) { return params_from_json(read_json(file)); }

KernelFile kernels_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("kernels: expected a JSON object");
  KernelFile out;
  out.spec.p = j.at("p").get<int>();
  if (j.contains("truncation")) out.spec.truncation = j.at("truncation").get<std::int64_t>();
  if (j.contains("truncation_factor")) out.spec.truncation_factor = j.at("truncation_factor").get<double>();
  if (j.contains("shape")) {
    const auto shape = j.at("shape").get<std::string>();
    if (shape == "increment") out.spec.shape = KernelShape::Increment;
    else if (shape == "pure_power") out.spec.shape = KernelShape::PurePower;
    else throw std::invalid_argument("kernels: unknown shape '" + shape + "'");
  }
  if (j.contains("noise")) {
    const auto noise = j.at("noise").get<std::string>();
    if (noise == "gaussian") out.noise = NoiseLaw::Gaussian;
    else if (noise == "rademacher") out.noise = NoiseLaw::Rademacher;
    else throw std::invalid_argument("kernels: unknown noise law '" + noise + "'");
  }
  for (const auto& k : j.at("kernels")) {
    KernelEntry e;
    e.i = k.at("i").get<int>() - 1;
    e.j = k.at("j").get<int>() - 1;
    const auto side = k.value("side", std::string("+"));
    if (side == "+") e.side = Side::Plus;
    else if (side == "-") e.side = Side::Minus;
    else throw std::invalid_argument("kernels: side must be '+' or '-'");
    e.regime = regime_from_string(k.at("regime").get<std::string>());
    e.d = k.value("d", 0.0);
    e.alpha = k.at("alpha").get<double>();
    out.spec.entries.push_back(e);
  }
  validate_kernels(out.spec);
  return out;
}

KernelFile read_kernels(const std::filesystem::path& file) { return kernels_from_json(read_json(file)); }

void write_path_csv(const std::filesystem::path& file, const SamplePath& path) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "t";
  for (Eigen::Index u = 0; u < path.values.cols(); ++u) out << ",X_" << (u + 1);
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  const Eigen::Index offset = path.meta.integrated ? 0 : 1;
  for (Eigen::Index t = 0; t < path.values.rows(); ++t) {
    out << (t + offset);
    for (Eigen::Index u = 0; u < path.values.cols(); ++u) out << ',' << path.values(t, u);
    out << '\n';
  }
}

SamplePath read_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(file.string() + ": empty file");
  const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
  if (cols < 1) throw std::invalid_argument(file.string() + ": expected header t,X_1,...");
  std::vector<double> values;
  Eigen::Index first_t = -1;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (rows == 0) first_t = std::stol(cell);
    Eigen::Index count = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (count != cols) throw std::invalid_argument(file.string() + ": ragged row");
    ++rows;
  }
  SamplePath path;
  path.values.resize(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t)
    for (Eigen::Index u = 0; u < cols; ++u) path.values(t, u) = values[static_cast<std::size_t>(t * cols + u)];
  path.meta.integrated = first_t == 0;
  path.meta.n = path.meta.integrated ? rows - 1 : rows;
  path.meta.method = "csv";
  return path;
}

}  // namespace mfbm::io
