#include "mfbm/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using mfbm::Philox4x32;

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Philox4x32::encrypt({0u, 0u, 0u, 0u}, {0u, 0u}),
            (Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::encrypt({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::encrypt({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamIsReproducible) {
  Philox4x32 a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Philox, StreamsAndSeedsDiffer) {
  Philox4x32 a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    same_ab += x == y;
    same_ac += x == z;
  }
  EXPECT_LT(same_ab, 3);
  EXPECT_LT(same_ac, 3);
}

TEST(Philox, FirstOutputsAreTheBlockOfCounterZero) {
  Philox4x32 g(0x299f31d0a4093822ull, 0);
  const auto block = Philox4x32::encrypt({0u, 0u, 0u, 0u}, {0xa4093822u, 0x299f31d0u});
  for (int k = 0; k < 4; ++k) EXPECT_EQ(g(), block[static_cast<std::size_t>(k)]);
}

TEST(NormalSource, Moments) {
  mfbm::NormalSource s(1, 2);
  const int n = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sum2 += x * x;
    sum4 += x * x * x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sum4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
  double r = 0;
  for (int i = 0; i < n; ++i) r += s.rademacher();
  EXPECT_NEAR(r / n, 0.0, 5.0 / std::sqrt(n));
}
