// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2 only; called after a runtime CPU check.

#include "closed_loop_impl.hpp"
#include "squeezetrack/simd/batch_avx2.hpp"

namespace squeezetrack::kernels {

void run_closed_loop_avx2(const LoopCoefficients& coeffs, const LoopLanes& io) {
  detail::closed_loop<simd::Avx2Batch>(coeffs, io);
}

namespace detail {
void normal_pairs_avx2(std::uint64_t* rng, std::size_t lanes, std::size_t count, double* z0,
                       double* z1) {
  normal_pairs<simd::Avx2Batch>(rng, lanes, count, z0, z1);
}
}  // namespace detail

}  // namespace squeezetrack::kernels
