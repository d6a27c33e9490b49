#pragma once

#include <stdexcept>
#include <string>

namespace mfbm {

/// The parameters do not define a valid covariance (Q is not positive semidefinite).
class ExistenceError : public std::domain_error {
 public:
  explicit ExistenceError(const std::string& what) : std::domain_error(what) {}
};

/// The circulant embedding has negative eigenvalues that the chosen policy does not allow.
class EmbeddingError : public std::runtime_error {
 public:
  explicit EmbeddingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mfbm
