// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Four-lane double batch over AVX2. Only include from translation units
// compiled with -mavx2; FMA is deliberately not enabled so results match the
// scalar instantiation bit for bit.

#if !defined(__AVX2__)
#error "batch_avx2.hpp requires -mavx2"
#endif

#include <immintrin.h>

#include <cstdint>

namespace squeezetrack::simd {

struct Avx2D {
  __m256d v;
  Avx2D() = default;
  Avx2D(__m256d x) : v(x) {}
  Avx2D(double x) : v(_mm256_set1_pd(x)) {}
};

struct Avx2U {
  __m256i v;
  Avx2U() = default;
  Avx2U(__m256i x) : v(x) {}
  Avx2U(std::uint64_t x) : v(_mm256_set1_epi64x(static_cast<long long>(x))) {}
};

struct Avx2M {
  __m256d v;
};

struct Avx2Batch {
  static constexpr int kWidth = 4;
  using D = Avx2D;
  using U = Avx2U;
  using M = Avx2M;

  static D load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, D x) { _mm256_storeu_pd(p, x.v); }
  static U load_u(const std::uint64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
  }
  static void store_u(std::uint64_t* p, U x) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), x.v);
  }
  static void store_mask(unsigned char* p, M m) {
    const int bits = _mm256_movemask_pd(m.v);
    for (int i = 0; i < kWidth; ++i) p[i] = (bits >> i) & 1;
  }
};

inline Avx2D operator+(Avx2D a, Avx2D b) { return _mm256_add_pd(a.v, b.v); }
inline Avx2D operator-(Avx2D a, Avx2D b) { return _mm256_sub_pd(a.v, b.v); }
inline Avx2D operator*(Avx2D a, Avx2D b) { return _mm256_mul_pd(a.v, b.v); }
inline Avx2D operator/(Avx2D a, Avx2D b) { return _mm256_div_pd(a.v, b.v); }
inline Avx2D operator-(Avx2D a) { return _mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)); }

inline Avx2M operator<(Avx2D a, Avx2D b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)}; }
inline Avx2M operator>(Avx2D a, Avx2D b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ)}; }
inline Avx2M operator<=(Avx2D a, Avx2D b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_LE_OQ)}; }
inline Avx2M operator>=(Avx2D a, Avx2D b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ)}; }
inline Avx2M operator==(Avx2D a, Avx2D b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }

inline Avx2M mask_and(Avx2M a, Avx2M b) { return {_mm256_and_pd(a.v, b.v)}; }
inline Avx2M mask_or(Avx2M a, Avx2M b) { return {_mm256_or_pd(a.v, b.v)}; }
inline Avx2M mask_not(Avx2M a) {
  return {_mm256_xor_pd(a.v, _mm256_castsi256_pd(_mm256_set1_epi64x(-1)))};
}
inline bool any(Avx2M m) { return _mm256_movemask_pd(m.v) != 0; }
inline bool all(Avx2M m) { return _mm256_movemask_pd(m.v) == 0xF; }

inline Avx2D select(Avx2M m, Avx2D a, Avx2D b) { return _mm256_blendv_pd(b.v, a.v, m.v); }
inline Avx2D sqrt(Avx2D x) { return _mm256_sqrt_pd(x.v); }
inline Avx2D abs(Avx2D x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x.v); }
inline Avx2D round_nearest(Avx2D x) {
  return _mm256_round_pd(x.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}
inline Avx2D floor(Avx2D x) { return _mm256_floor_pd(x.v); }

inline Avx2U operator+(Avx2U a, Avx2U b) { return _mm256_add_epi64(a.v, b.v); }
inline Avx2U operator^(Avx2U a, Avx2U b) { return _mm256_xor_si256(a.v, b.v); }
inline Avx2U operator|(Avx2U a, Avx2U b) { return _mm256_or_si256(a.v, b.v); }
inline Avx2U operator&(Avx2U a, Avx2U b) { return _mm256_and_si256(a.v, b.v); }

template <int K>
inline Avx2U shl(Avx2U x) {
  return _mm256_slli_epi64(x.v, K);
}
template <int K>
inline Avx2U shr(Avx2U x) {
  return _mm256_srli_epi64(x.v, K);
}
template <int K>
inline Avx2U rotl(Avx2U x) {
  return _mm256_or_si256(_mm256_slli_epi64(x.v, K), _mm256_srli_epi64(x.v, 64 - K));
}

inline Avx2D as_double(Avx2U u) { return _mm256_castsi256_pd(u.v); }
inline Avx2U as_bits(Avx2D d) { return _mm256_castpd_si256(d.v); }

}  // namespace squeezetrack::simd
