// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx512f only; called after a runtime CPU check.

#include "closed_loop_impl.hpp"
#include "squeezetrack/simd/batch_avx512.hpp"

namespace squeezetrack::kernels {

void run_closed_loop_avx512(const LoopCoefficients& coeffs, const LoopLanes& io) {
  detail::closed_loop<simd::Avx512Batch>(coeffs, io);
}

namespace detail {
void normal_pairs_avx512(std::uint64_t* rng, std::size_t lanes, std::size_t count, double* z0,
                         double* z1) {
  normal_pairs<simd::Avx512Batch>(rng, lanes, count, z0, z1);
}
}  // namespace detail

}  // namespace squeezetrack::kernels
