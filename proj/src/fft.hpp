// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>

namespace squeezetrack::detail {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftBuffer fft_alloc(std::size_t n);

// Unnormalized forward DFT, out[j] = sum_k in[k] exp(-2 pi i j k / n).
// Buffers must come from fft_alloc. Thread safe.
void fft_forward(std::size_t n, fftw_complex* in, fftw_complex* out);

}  // namespace squeezetrack::detail
