// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "closed_loop_impl.hpp"
#include "squeezetrack/simd/batch_scalar.hpp"

namespace squeezetrack::kernels {

void run_closed_loop_scalar(const LoopCoefficients& coeffs, const LoopLanes& io) {
  detail::closed_loop<simd::ScalarBatch>(coeffs, io);
}

namespace detail {
void normal_pairs_scalar(std::uint64_t* rng, std::size_t lanes, std::size_t count, double* z0,
                         double* z1) {
  normal_pairs<simd::ScalarBatch>(rng, lanes, count, z0, z1);
}
}  // namespace detail

}  // namespace squeezetrack::kernels
