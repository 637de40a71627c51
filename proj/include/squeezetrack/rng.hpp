// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "squeezetrack/simd/random.hpp"

namespace squeezetrack {

// Each run owns three independent substreams.
enum class StreamTag : std::uint64_t {
  kPhase = 0x9E6C63D0676A9A99ULL,
  kQuadratureX = 0x3C6EF372FE94F82BULL,
  kQuadratureY = 0xA54FF53A5F1D36F1ULL,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the substream `tag` of run `run_index` under `base_seed`.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t run_index, StreamTag tag);

/// Expands a 64-bit seed into a xoshiro256+ state (never all zero).
std::array<std::uint64_t, 4> xoshiro_state(std::uint64_t seed);

/// Scalar standard-normal generator. It shares the per-lane arithmetic of
/// the batched kernels, so a lane seeded identically yields the same draws.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);

  std::pair<double, double> next_pair();

  const std::array<std::uint64_t, 4>& state() const { return state_; }

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace squeezetrack
