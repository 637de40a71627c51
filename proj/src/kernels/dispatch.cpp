// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "squeezetrack/error.hpp"
#include "squeezetrack/kernels/closed_loop.hpp"

namespace squeezetrack::kernels {

namespace detail {
void normal_pairs_scalar(std::uint64_t*, std::size_t, std::size_t, double*, double*);
#if defined(SQUEEZETRACK_HAVE_X86_KERNELS)
void normal_pairs_avx2(std::uint64_t*, std::size_t, std::size_t, double*, double*);
void normal_pairs_avx512(std::uint64_t*, std::size_t, std::size_t, double*, double*);
#endif
}  // namespace detail

#if !defined(SQUEEZETRACK_HAVE_X86_KERNELS)
void run_closed_loop_avx2(const LoopCoefficients&, const LoopLanes&) {
  throw ValidationError("avx2 backend not compiled in");
}
void run_closed_loop_avx512(const LoopCoefficients&, const LoopLanes&) {
  throw ValidationError("avx512 backend not compiled in");
}
#endif

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kReference: return "reference";
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kAvx512: return "avx512";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "auto") return best_backend();
  for (Backend b : {Backend::kReference, Backend::kScalar, Backend::kAvx2, Backend::kAvx512}) {
    if (name == backend_name(b)) return b;
  }
  throw ValidationError("unknown backend '" + std::string(name) +
                        "' (expected auto, reference, scalar, avx2 or avx512)");
}

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::kReference:
    case Backend::kScalar:
      return true;
#if defined(SQUEEZETRACK_HAVE_X86_KERNELS)
    case Backend::kAvx2:
      return __builtin_cpu_supports("avx2");
    case Backend::kAvx512:
      return __builtin_cpu_supports("avx512f");
#else
    default:
      return false;
#endif
  }
  return false;
}

Backend best_backend() {
  if (backend_supported(Backend::kAvx512)) return Backend::kAvx512;
  if (backend_supported(Backend::kAvx2)) return Backend::kAvx2;
  return Backend::kScalar;
}

std::size_t backend_width(Backend backend) {
  switch (backend) {
    case Backend::kAvx2: return 4;
    case Backend::kAvx512: return 8;
    default: return 1;
  }
}

namespace {
void require(Backend backend, std::size_t lanes) {
  if (backend == Backend::kReference) {
    throw ValidationError("the reference backend has no batched kernel");
  }
  if (!backend_supported(backend)) {
    throw ValidationError("backend " + std::string(backend_name(backend)) +
                          " is not supported on this CPU");
  }
  if (lanes % backend_width(backend) != 0) {
    throw ValidationError("lane count must be a multiple of the backend width");
  }
}
}  // namespace

void run_closed_loop(Backend backend, const LoopCoefficients& coeffs, const LoopLanes& io) {
  require(backend, io.lanes);
  switch (backend) {
    case Backend::kAvx2: run_closed_loop_avx2(coeffs, io); break;
    case Backend::kAvx512: run_closed_loop_avx512(coeffs, io); break;
    default: run_closed_loop_scalar(coeffs, io); break;
  }
}

void fill_normal_pairs(Backend backend, std::uint64_t* rng, std::size_t lanes, std::size_t count,
                       double* z0, double* z1) {
  require(backend, lanes);
  switch (backend) {
#if defined(SQUEEZETRACK_HAVE_X86_KERNELS)
    case Backend::kAvx2: detail::normal_pairs_avx2(rng, lanes, count, z0, z1); break;
    case Backend::kAvx512: detail::normal_pairs_avx512(rng, lanes, count, z0, z1); break;
#endif
    default: detail::normal_pairs_scalar(rng, lanes, count, z0, z1); break;
  }
}

}  // namespace squeezetrack::kernels
