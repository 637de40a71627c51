// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// xoshiro256+ with one independent stream per lane, and Box-Muller normal
// pairs on top of it. Works for every batch width.

#include <cstdint>

#include "squeezetrack/simd/vmath.hpp"

namespace squeezetrack::simd {

template <class B>
struct Xoshiro256Plus {
  using U = typename B::U;
  U s0, s1, s2, s3;

  // State is stored word-major: words[w * stride + lane].
  static Xoshiro256Plus load(const std::uint64_t* words, std::size_t stride) {
    return {B::load_u(words), B::load_u(words + stride), B::load_u(words + 2 * stride),
            B::load_u(words + 3 * stride)};
  }

  void store(std::uint64_t* words, std::size_t stride) const {
    B::store_u(words, s0);
    B::store_u(words + stride, s1);
    B::store_u(words + 2 * stride, s2);
    B::store_u(words + 3 * stride, s3);
  }

  U next() {
    const U result = s0 + s3;
    const U t = shl<17>(s1);
    s2 = s2 ^ s0;
    s3 = s3 ^ s1;
    s1 = s1 ^ s2;
    s0 = s0 ^ s3;
    s2 = s2 ^ t;
    s3 = rotl<45>(s3);
    return result;
  }
};

// Top 52 bits as a double in [1, 2).
template <class B>
inline typename B::D bits_to_one_two(typename B::U bits) {
  using U = typename B::U;
  return as_double(shr<12>(bits) | U(0x3FF0000000000000ULL));
}

template <class B>
inline void normal_pair(Xoshiro256Plus<B>& gen, typename B::D& z0, typename B::D& z1) {
  using D = typename B::D;
  const D u1 = D(2.0) - bits_to_one_two<B>(gen.next());  // (0, 1]
  const D u2 = bits_to_one_two<B>(gen.next()) - D(1.0);  // [0, 1)
  const D radius = sqrt(D(-2.0) * log_positive<B>(u1));
  D s, c;
  sincos<B>(D(coeff::kTwoPi) * u2, s, c);
  z0 = radius * c;
  z1 = radius * s;
}

}  // namespace squeezetrack::simd
