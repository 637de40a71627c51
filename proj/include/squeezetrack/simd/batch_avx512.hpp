// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Eight-lane double batch over AVX-512F (no DQ/VL extensions required).

#if !defined(__AVX512F__)
#error "batch_avx512.hpp requires -mavx512f"
#endif

#include <immintrin.h>

#include <cstdint>

namespace squeezetrack::simd {

struct Avx512D {
  __m512d v;
  Avx512D() = default;
  Avx512D(__m512d x) : v(x) {}
  Avx512D(double x) : v(_mm512_set1_pd(x)) {}
};

struct Avx512U {
  __m512i v;
  Avx512U() = default;
  Avx512U(__m512i x) : v(x) {}
  Avx512U(std::uint64_t x) : v(_mm512_set1_epi64(static_cast<long long>(x))) {}
};

struct Avx512M {
  __mmask8 v;
};

struct Avx512Batch {
  static constexpr int kWidth = 8;
  using D = Avx512D;
  using U = Avx512U;
  using M = Avx512M;

  static D load(const double* p) { return _mm512_loadu_pd(p); }
  static void store(double* p, D x) { _mm512_storeu_pd(p, x.v); }
  static U load_u(const std::uint64_t* p) { return _mm512_loadu_si512(p); }
  static void store_u(std::uint64_t* p, U x) { _mm512_storeu_si512(p, x.v); }
  static void store_mask(unsigned char* p, M m) {
    for (int i = 0; i < kWidth; ++i) p[i] = (m.v >> i) & 1;
  }
};

namespace detail {
inline __m512d flip_bits(__m512d x, long long pattern) {
  return _mm512_castsi512_pd(
      _mm512_xor_si512(_mm512_castpd_si512(x), _mm512_set1_epi64(pattern)));
}
}  // namespace detail

inline Avx512D operator+(Avx512D a, Avx512D b) { return _mm512_add_pd(a.v, b.v); }
inline Avx512D operator-(Avx512D a, Avx512D b) { return _mm512_sub_pd(a.v, b.v); }
inline Avx512D operator*(Avx512D a, Avx512D b) { return _mm512_mul_pd(a.v, b.v); }
inline Avx512D operator/(Avx512D a, Avx512D b) { return _mm512_div_pd(a.v, b.v); }
inline Avx512D operator-(Avx512D a) {
  return detail::flip_bits(a.v, static_cast<long long>(0x8000000000000000ULL));
}

inline Avx512M operator<(Avx512D a, Avx512D b) { return {_mm512_cmp_pd_mask(a.v, b.v, _CMP_LT_OQ)}; }
inline Avx512M operator>(Avx512D a, Avx512D b) { return {_mm512_cmp_pd_mask(a.v, b.v, _CMP_GT_OQ)}; }
inline Avx512M operator<=(Avx512D a, Avx512D b) { return {_mm512_cmp_pd_mask(a.v, b.v, _CMP_LE_OQ)}; }
inline Avx512M operator>=(Avx512D a, Avx512D b) { return {_mm512_cmp_pd_mask(a.v, b.v, _CMP_GE_OQ)}; }
inline Avx512M operator==(Avx512D a, Avx512D b) { return {_mm512_cmp_pd_mask(a.v, b.v, _CMP_EQ_OQ)}; }

inline Avx512M mask_and(Avx512M a, Avx512M b) { return {static_cast<__mmask8>(a.v & b.v)}; }
inline Avx512M mask_or(Avx512M a, Avx512M b) { return {static_cast<__mmask8>(a.v | b.v)}; }
inline Avx512M mask_not(Avx512M a) { return {static_cast<__mmask8>(~a.v)}; }
inline bool any(Avx512M m) { return m.v != 0; }
inline bool all(Avx512M m) { return m.v == 0xFF; }

inline Avx512D select(Avx512M m, Avx512D a, Avx512D b) { return _mm512_mask_blend_pd(m.v, b.v, a.v); }
inline Avx512D sqrt(Avx512D x) { return _mm512_sqrt_pd(x.v); }
inline Avx512D abs(Avx512D x) {
  return _mm512_castsi512_pd(_mm512_and_si512(
      _mm512_castpd_si512(x.v), _mm512_set1_epi64(0x7FFFFFFFFFFFFFFFLL)));
}
inline Avx512D round_nearest(Avx512D x) {
  return _mm512_roundscale_pd(x.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}
inline Avx512D floor(Avx512D x) {
  return _mm512_roundscale_pd(x.v, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
}

inline Avx512U operator+(Avx512U a, Avx512U b) { return _mm512_add_epi64(a.v, b.v); }
inline Avx512U operator^(Avx512U a, Avx512U b) { return _mm512_xor_si512(a.v, b.v); }
inline Avx512U operator|(Avx512U a, Avx512U b) { return _mm512_or_si512(a.v, b.v); }
inline Avx512U operator&(Avx512U a, Avx512U b) { return _mm512_and_si512(a.v, b.v); }

template <int K>
inline Avx512U shl(Avx512U x) {
  return _mm512_slli_epi64(x.v, K);
}
template <int K>
inline Avx512U shr(Avx512U x) {
  return _mm512_srli_epi64(x.v, K);
}
template <int K>
inline Avx512U rotl(Avx512U x) {
  return _mm512_rol_epi64(x.v, K);
}

inline Avx512D as_double(Avx512U u) { return _mm512_castsi512_pd(u.v); }
inline Avx512U as_bits(Avx512D d) { return _mm512_castpd_si512(d.v); }

}  // namespace squeezetrack::simd
