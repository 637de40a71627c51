// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Elementary functions written once against the batch interface and
// instantiated for every width. Coefficients follow the Cephes library
// (log.c, sin.c, atan.c); branches are turned into lane selects, so the
// same operation sequence runs in every lane and the results are identical
// across widths. Accuracy is a couple of ulp, which is plenty for a noisy
// simulation; the reference path uses <cmath> instead.

#include <cstddef>
#include <cstdint>

#include "squeezetrack/simd/batch_scalar.hpp"

namespace squeezetrack::simd {

namespace coeff {

inline constexpr double kLogP[] = {
    1.01875663804580931796E-4, 4.97494994976747001425E-1, 4.70579119878881725854E0,
    1.44989225341610930846E1,  1.79368678507819816313E1,  7.70838733755885391666E0,
};
inline constexpr double kLogQ[] = {
    1.12873587189167450590E1, 4.52279145837532221105E1, 8.29875266912776603211E1,
    7.11544750618563894466E1, 2.31251620126765340583E1,
};

inline constexpr double kSin[] = {
    1.58962301576546568060E-10, -2.50507477628578072866E-8, 2.75573136213857245213E-6,
    -1.98412698295895385996E-4, 8.33333333332211858878E-3,  -1.66666666666666307295E-1,
};
inline constexpr double kCos[] = {
    -1.13585365213876817300E-11, 2.08757008419747316778E-9, -2.75573141792967388112E-7,
    2.48015872888517045348E-5,   -1.38888888888730564116E-3, 4.16666666666665929218E-2,
};

inline constexpr double kAtanP[] = {
    -8.750608600031904122785E-1, -1.615753718733365076637E1, -7.500855792314704667340E1,
    -1.228866684490136173410E2,  -6.485021904942025371773E1,
};
inline constexpr double kAtanQ[] = {
    2.485846490142306297962E1, 1.650270098316988542046E2, 4.328810604912902668951E2,
    4.853903996359136964868E2, 1.945506571482613964425E2,
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPiOver2 = 1.57079632679489661923;
inline constexpr double kPiOver4 = 0.78539816339744830962;
inline constexpr double kTwoOverPi = 0.63661977236758134308;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kSqrtHalf = 0.70710678118654752440;

// pi/2 split so that q * kPio2Hi is exact for |q| < 2^29.
inline constexpr double kPio2Hi = 1.57079625129699707031E0;
inline constexpr double kPio2Mid = 7.54978941586159635335E-8;
inline constexpr double kPio2Lo = 5.39030285815811905290E-15;

inline constexpr double kLn2Hi = 0.693359375;
inline constexpr double kLn2Lo = -2.121944400546905827679E-4;

inline constexpr double kTan3PiOver8 = 2.41421356237309504880;
inline constexpr double kAtanMoreBits = 6.123233995736765886130E-17;

}  // namespace coeff

template <class D, std::size_t N>
inline D polevl(D x, const double (&c)[N]) {
  D acc = c[0];
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + c[i];
  return acc;
}

// Same as polevl with an implicit leading coefficient of one.
template <class D, std::size_t N>
inline D p1evl(D x, const double (&c)[N]) {
  D acc = x + c[0];
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + c[i];
  return acc;
}

/// Natural log for positive normal finite arguments.
template <class B>
inline typename B::D log_positive(typename B::D x) {
  using D = typename B::D;
  using U = typename B::U;
  using M = typename B::M;
  const U bits = as_bits(x);
  const U biased = shr<52>(bits) & U(0x7FFULL);
  // Small integer to double through the 2^52 magic constant.
  D e = as_double(biased | U(0x4330000000000000ULL)) - D(4503599627370496.0);
  e = e - D(1022.0);
  const D m = as_double((bits & U(0x000FFFFFFFFFFFFFULL)) | U(0x3FE0000000000000ULL));
  const M low = m < D(coeff::kSqrtHalf);
  e = select(low, e - D(1.0), e);
  const D f = select(low, (m + m) - D(1.0), m - D(1.0));
  const D z = f * f;
  D y = f * (z * polevl(f, coeff::kLogP) / p1evl(f, coeff::kLogQ));
  y = y + e * D(coeff::kLn2Lo);
  y = y - D(0.5) * z;
  D r = f + y;
  r = r + e * D(coeff::kLn2Hi);
  return r;
}

/// sin and cos together, for moderate arguments (|x| well below 2^29).
template <class B>
inline void sincos(typename B::D x, typename B::D& s, typename B::D& c) {
  using D = typename B::D;
  using M = typename B::M;
  const D q = round_nearest(x * D(coeff::kTwoOverPi));
  const D r = ((x - q * D(coeff::kPio2Hi)) - q * D(coeff::kPio2Mid)) - q * D(coeff::kPio2Lo);
  const D quadrant = q - D(4.0) * floor(q * D(0.25));
  const D z = r * r;
  const D sp = r + r * (z * polevl(z, coeff::kSin));
  const D cp = (D(1.0) - D(0.5) * z) + z * z * polevl(z, coeff::kCos);
  const M k1 = quadrant == D(1.0);
  const M k2 = quadrant == D(2.0);
  const M k3 = quadrant == D(3.0);
  s = select(k1, cp, select(k2, -sp, select(k3, -cp, sp)));
  c = select(k1, -sp, select(k2, -cp, select(k3, sp, cp)));
}

template <class B>
inline typename B::D atan(typename B::D x) {
  using D = typename B::D;
  using M = typename B::M;
  const D ax = abs(x);
  const M big = ax > D(coeff::kTan3PiOver8);
  const M mid = mask_and(mask_not(big), ax > D(0.66));
  const D t = select(big, D(-1.0) / ax, select(mid, (ax - D(1.0)) / (ax + D(1.0)), ax));
  const D base = select(big, D(coeff::kPiOver2), select(mid, D(coeff::kPiOver4), D(0.0)));
  const D more = select(big, D(coeff::kAtanMoreBits),
                        select(mid, D(0.5 * coeff::kAtanMoreBits), D(0.0)));
  D z = t * t;
  z = z * polevl(z, coeff::kAtanP) / p1evl(z, coeff::kAtanQ);
  z = t * z + t;
  z = z + more;
  const D y = base + z;
  return select(x < D(0.0), -y, y);
}

/// Four-quadrant arctangent of y/x, in [-pi, pi]; atan2(0, 0) is 0.
template <class B>
inline typename B::D atan2(typename B::D y, typename B::D x) {
  using D = typename B::D;
  using M = typename B::M;
  const M x_zero = x == D(0.0);
  const D safe_x = select(x_zero, D(1.0), x);
  const D z = atan<B>(y / safe_x);
  const D w = select(x < D(0.0), select(y < D(0.0), D(-coeff::kPi), D(coeff::kPi)), D(0.0));
  const D axis = select(y > D(0.0), D(coeff::kPiOver2),
                        select(y < D(0.0), D(-coeff::kPiOver2), D(0.0)));
  return select(x_zero, axis, w + z);
}

}  // namespace squeezetrack::simd
