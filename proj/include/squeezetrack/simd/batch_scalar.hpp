// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Width-1 "batch": the scalar reference instantiation of every templated
// kernel. Lane types are the plain built-ins so the same generic code reads
// naturally for both scalars and vectors.

#include <bit>
#include <cmath>
#include <cstdint>

namespace squeezetrack::simd {

struct ScalarBatch {
  static constexpr int kWidth = 1;
  using D = double;
  using U = std::uint64_t;
  using M = bool;

  static D load(const double* p) { return *p; }
  static void store(double* p, D v) { *p = v; }
  static U load_u(const std::uint64_t* p) { return *p; }
  static void store_u(std::uint64_t* p, U v) { *p = v; }
  static void store_mask(unsigned char* p, M m) { *p = m ? 1 : 0; }
};

inline double select(bool m, double a, double b) { return m ? a : b; }
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::fabs(x); }
inline double round_nearest(double x) { return std::nearbyint(x); }
inline double floor(double x) { return std::floor(x); }

inline bool mask_and(bool a, bool b) { return a && b; }
inline bool mask_or(bool a, bool b) { return a || b; }
inline bool mask_not(bool a) { return !a; }
inline bool any(bool m) { return m; }
inline bool all(bool m) { return m; }

inline double as_double(std::uint64_t u) { return std::bit_cast<double>(u); }
inline std::uint64_t as_bits(double d) { return std::bit_cast<std::uint64_t>(d); }

template <int K>
inline std::uint64_t shl(std::uint64_t x) {
  return x << K;
}
template <int K>
inline std::uint64_t shr(std::uint64_t x) {
  return x >> K;
}
template <int K>
inline std::uint64_t rotl(std::uint64_t x) {
  return std::rotl(x, K);
}

}  // namespace squeezetrack::simd
