// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace squeezetrack::kernels {

// Backends share one templated implementation. kScalar, kAvx2 and kAvx512
// produce bit-identical lanes; kReference marks the unbatched path built
// from the module operations and is handled by the simulator.
enum class Backend { kReference, kScalar, kAvx2, kAvx512 };

std::string_view backend_name(Backend backend);
/// Throws ValidationError on unknown names; "auto" maps to best_backend().
Backend parse_backend(std::string_view name);
bool backend_supported(Backend backend);
Backend best_backend();
/// Lanes processed per instruction (1 for the scalar backends).
std::size_t backend_width(Backend backend);

/// Lanes per group handed to a kernel; a multiple of every backend width.
inline constexpr std::size_t kGroupLanes = 8;

inline constexpr std::size_t kNoFailure = static_cast<std::size_t>(-1);

/// Everything a lane needs that is common to the whole ensemble.
struct LoopCoefficients {
  std::size_t steps = 0;
  std::size_t warmup_steps = 0;
  double decay_x = 1.0, decay_y = 1.0, sqrt_gamma = 0.0;
  double m_x1 = 0.0, m_x2 = 0.0, m_y1 = 0.0, m_y2 = 0.0;
  double e_dt = 0.0;
  double sd_chi_x = 0.0, sd_omega_x = 0.0, sd_chi_y = 0.0, sd_omega_y = 0.0;
  double sd_x0 = 1.0, sd_y0 = 1.0;
  double filter_decay = 1.0;  // forgetting factor per step
  double filter_gain = 1.0;   // multiplies dQ
  double b_step = 0.0;        // filter_gain * dt
  double chi = 1.0;
  double blend = 1.0;  // 1 - delta
  std::size_t trace_stride = 0;  // 0 disables the trace
};

/// Per-group buffers, lane-interleaved: element (i, lane) at i * lanes + lane.
struct LoopLanes {
  std::size_t lanes = 0;
  const double* phi = nullptr;    // steps x lanes
  std::uint64_t* rng_x = nullptr;  // 4 x lanes xoshiro words, updated in place
  std::uint64_t* rng_y = nullptr;
  double* sum_sq = nullptr;        // lanes
  double* sum_cos = nullptr;
  double* sum_sin = nullptr;
  std::size_t* failed_step = nullptr;  // lanes; kNoFailure when finite throughout
  double* trace_estimate = nullptr;    // ceil(steps / stride) x lanes, optional
  double* trace_theta = nullptr;
};

/// Runs the closed loop for every lane. `lanes` must be a multiple of
/// backend_width(backend); kReference is rejected.
void run_closed_loop(Backend backend, const LoopCoefficients& coeffs, const LoopLanes& io);

// Per-backend entry points, exposed for the equivalence tests.
void run_closed_loop_scalar(const LoopCoefficients& coeffs, const LoopLanes& io);
void run_closed_loop_avx2(const LoopCoefficients& coeffs, const LoopLanes& io);
void run_closed_loop_avx512(const LoopCoefficients& coeffs, const LoopLanes& io);

/// Fills z0, z1 (count x lanes, interleaved) with normal pairs from
/// per-lane xoshiro states, for testing the batched generator.
void fill_normal_pairs(Backend backend, std::uint64_t* rng, std::size_t lanes, std::size_t count,
                       double* z0, double* z1);

}  // namespace squeezetrack::kernels
