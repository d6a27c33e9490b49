#pragma once

#include <cmath>
#include <numbers>

namespace mfbm {

inline constexpr double kPi = std::numbers::pi;

/// sign(0) = 0.
inline double sign(double x) { return (x > 0.0) - (x < 0.0); }

/// Gamma function on the positive axis; glibc's tgamma is within a few ulp there.
inline double gamma_fn(double x) { return std::tgamma(x); }

inline double beta_fn(double a, double b) { return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b); }

/// x log|x| with 0 log 0 := 0.
inline double xlogabsx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

}  // namespace mfbm
