#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace mfbm {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The 64-bit seed is the key; the upper half of the 128-bit counter selects a
 * substream, so replicate r of a run is reproducible on its own as
 * Philox4x32(seed, r). Satisfies UniformRandomBitGenerator.
 */
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;

  static constexpr const char* kName = "philox4x32-10";

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// The raw block function: 10 rounds of Philox on (counter, key).
  static Block encrypt(Block counter, std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  Block counter_;
  Block buffer_{};
  int used_ = 4;
};

/// Standard normal and Rademacher draws on top of a Philox substream.
class NormalSource {
 public:
  NormalSource(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}

  double normal() { return normal_(engine_); }
  double rademacher() { return (engine_() & 1u) ? 1.0 : -1.0; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mfbm
