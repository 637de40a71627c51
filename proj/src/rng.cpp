// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/rng.hpp"

namespace squeezetrack {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t run_index, StreamTag tag) {
  std::uint64_t s = base_seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (run_index * 0xD1B54A32D192ED03ULL);
  h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(tag);
  return splitmix64(s);
}

std::array<std::uint64_t, 4> xoshiro_state(std::uint64_t seed) {
  std::array<std::uint64_t, 4> out{};
  std::uint64_t s = seed;
  for (auto& w : out) w = splitmix64(s);
  if ((out[0] | out[1] | out[2] | out[3]) == 0) out[0] = 1;
  return out;
}

NormalStream::NormalStream(std::uint64_t seed) : state_(xoshiro_state(seed)) {}

std::pair<double, double> NormalStream::next_pair() {
  using B = simd::ScalarBatch;
  simd::Xoshiro256Plus<B> gen{state_[0], state_[1], state_[2], state_[3]};
  double z0 = 0.0;
  double z1 = 0.0;
  simd::normal_pair(gen, z0, z1);
  state_ = {gen.s0, gen.s1, gen.s2, gen.s3};
  return {z0, z1};
}

}  // namespace squeezetrack
