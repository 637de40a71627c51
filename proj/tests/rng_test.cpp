// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "squeezetrack/rng.hpp"

namespace squeezetrack {
namespace {

// Straight transcription of the published xoshiro256+ reference.
struct ReferenceXoshiro {
  std::uint64_t s[4];
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t result = s[0] + s[3];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

double unit(std::uint64_t bits) {
  const std::uint64_t b = (bits >> 12) | 0x3FF0000000000000ULL;
  double d;
  std::memcpy(&d, &b, sizeof d);
  return d;
}

TEST(SplitMix, MatchesPublishedSequenceFromZero) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(state), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(splitmix64(state), 0x06C45D188009454FULL);
}

TEST(StreamSeed, DistinctAcrossRunsAndTags) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t run = 0; run < 200; ++run) {
    for (StreamTag tag : {StreamTag::kPhase, StreamTag::kQuadratureX, StreamTag::kQuadratureY}) {
      seen.insert(stream_seed(7, run, tag));
    }
  }
  EXPECT_EQ(seen.size(), 600u);
  EXPECT_NE(stream_seed(1, 0, StreamTag::kPhase), stream_seed(2, 0, StreamTag::kPhase));
  EXPECT_EQ(stream_seed(9, 3, StreamTag::kQuadratureX), stream_seed(9, 3, StreamTag::kQuadratureX));
}

TEST(XoshiroState, NeverAllZero) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = xoshiro_state(seed);
    EXPECT_TRUE(s[0] | s[1] | s[2] | s[3]);
  }
}

TEST(Xoshiro, BatchGeneratorMatchesReference) {
  const auto init = xoshiro_state(12345);
  ReferenceXoshiro ref{{init[0], init[1], init[2], init[3]}};
  auto gen = simd::Xoshiro256Plus<simd::ScalarBatch>::load(init.data(), 1);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(gen.next(), ref.next()) << "draw " << i;
}

TEST(NormalStream, MatchesBoxMullerWithLibm) {
  const auto init = xoshiro_state(99);
  ReferenceXoshiro ref{{init[0], init[1], init[2], init[3]}};
  NormalStream stream(99);
  for (int i = 0; i < 20000; ++i) {
    const double u1 = 2.0 - unit(ref.next());
    const double u2 = unit(ref.next()) - 1.0;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    const auto [z0, z1] = stream.next_pair();
    ASSERT_NEAR(z0, radius * std::cos(angle), 1e-13 * (1.0 + radius));
    ASSERT_NEAR(z1, radius * std::sin(angle), 1e-13 * (1.0 + radius));
  }
}

TEST(NormalStream, FirstFourMoments) {
  NormalStream stream(2024);
  const int n = 400000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0, cross = 0;
  for (int i = 0; i < n / 2; ++i) {
    const auto [a, b] = stream.next_pair();
    for (double z : {a, b}) {
      m1 += z;
      m2 += z * z;
      m3 += z * z * z;
      m4 += z * z * z * z;
    }
    cross += a * b;
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  cross /= n / 2;
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(m1, 0.0, 4 * se);
  EXPECT_NEAR(m2, 1.0, 4 * std::sqrt(2.0) * se);
  EXPECT_NEAR(m3, 0.0, 4 * std::sqrt(15.0) * se);
  EXPECT_NEAR(m4, 3.0, 4 * std::sqrt(96.0) * se);
  EXPECT_NEAR(cross, 0.0, 4 * std::sqrt(2.0) * se);
}

TEST(NormalStream, SameSeedSameSequence) {
  NormalStream a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_pair();
    const auto y = b.next_pair();
    const auto z = c.next_pair();
    EXPECT_EQ(x, y);
    differs |= x != z;
  }
  EXPECT_TRUE(differs);
}

}  // namespace
}  // namespace squeezetrack
