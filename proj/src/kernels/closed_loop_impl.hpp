// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The closed loop written once against the batch interface. Included by one
// translation unit per instruction set.
//
// The LO phase is carried as the unit vector (ct, st) = e^{i theta}. With
// the quarter-turn readout, theta = arg(A) + (1 - delta) arg(C conj A) - pi/2,
// so e^{i theta} = -i (A/|A|) e^{i (1 - delta) arg(C conj A)}.

#include <cstddef>

#include "squeezetrack/kernels/closed_loop.hpp"
#include "squeezetrack/simd/random.hpp"

namespace squeezetrack::kernels::detail {

template <class B>
inline typename B::M is_finite(typename B::D v) {
  using namespace squeezetrack::simd;
  using D = typename B::D;
  // NaN fails the first test, +-inf the second.
  return mask_and(v == v, abs(v) < D(1.0e300));
}

template <class B>
void closed_loop_lanes(const LoopCoefficients& k, const LoopLanes& io, std::size_t lane0) {
  using namespace squeezetrack::simd;
  using D = typename B::D;
  using M = typename B::M;
  const std::size_t w = io.lanes;

  auto gx = Xoshiro256Plus<B>::load(io.rng_x + lane0, w);
  auto gy = Xoshiro256Plus<B>::load(io.rng_y + lane0, w);

  D z0, z1;
  normal_pair(gx, z0, z1);
  D x = z0 * D(k.sd_x0);
  normal_pair(gy, z0, z1);
  D y = z0 * D(k.sd_y0);

  D ar(0.0), ai(0.0), br(0.0), bi(0.0);
  D ct(1.0), st(0.0);
  D sum_sq(0.0), sum_cos(0.0), sum_sin(0.0);
  M ok = D(0.0) == D(0.0);
  D failed_at(-1.0);

  const D decay_x(k.decay_x), decay_y(k.decay_y), sqrt_gamma(k.sqrt_gamma);
  const D m_x1(k.m_x1), m_x2(k.m_x2), m_y1(k.m_y1), m_y2(k.m_y2), e_dt(k.e_dt);
  const D sd_chi_x(k.sd_chi_x), sd_omega_x(k.sd_omega_x);
  const D sd_chi_y(k.sd_chi_y), sd_omega_y(k.sd_omega_y);
  const D forget(k.filter_decay), gain(k.filter_gain), b_step(k.b_step), chi(k.chi);
  const D blend(k.blend);
  const D zero(0.0), one(1.0);

  for (std::size_t n = 0; n < k.steps; ++n) {
    const D phi = B::load(io.phi + n * w + lane0);
    D sphi, cphi;
    sincos<B>(phi, sphi, cphi);
    const D cos_d = ct * cphi + st * sphi;  // cos(theta - phi)
    const D sin_d = st * cphi - ct * sphi;  // sin(theta - phi)

    normal_pair(gx, z0, z1);
    const D chi_x = z0 * sd_chi_x;
    const D omega_x = z1 * sd_omega_x;
    normal_pair(gy, z0, z1);
    const D chi_y = z0 * sd_chi_y;
    const D omega_y = z1 * sd_omega_y;

    const D dq = cos_d * ((m_x1 * x + omega_x) + m_x2 * chi_x) +
                 sin_d * (((m_y1 * y + e_dt) + omega_y) + m_y2 * chi_y);
    x = decay_x * x + sqrt_gamma * chi_x;
    y = decay_y * y + sqrt_gamma * chi_y;

    const D g = gain * dq;
    ar = forget * ar + g * ct;
    ai = forget * ai + g * st;
    br = forget * br - b_step * (ct * ct - st * st);
    bi = forget * bi - b_step * (ct * st + st * ct);

    // C = A + chi B conj(A)
    const D cr = ar + chi * (br * ar + bi * ai);
    const D ci = ai + chi * (bi * ar - br * ai);
    const M c_zero = mask_and(cr == zero, ci == zero);
    const M a_zero = mask_and(ar == zero, ai == zero);

    if (n >= k.warmup_steps) {
      // Error vector C (-i) e^{-i phi}; a vanishing C reads as estimate 0.
      const D er = select(c_zero, cphi, ci * cphi - cr * sphi);
      const D ei = select(c_zero, -sphi, -(ci * sphi + cr * cphi));
      const D err = atan2<B>(ei, er);
      const D norm = sqrt(er * er + ei * ei);
      sum_sq = sum_sq + err * err;
      sum_cos = sum_cos + er / norm;
      sum_sin = sum_sin + ei / norm;
    }

    // D = C conj(A), with arg of a vanishing factor read as 0.
    D dr = select(c_zero, ar, cr * ar + ci * ai);
    D di = select(c_zero, -ai, ci * ar - cr * ai);
    dr = select(a_zero, cr, dr);
    di = select(a_zero, ci, di);
    const D beta = blend * atan2<B>(di, dr);
    D sb, cb;
    sincos<B>(beta, sb, cb);
    const D a_norm = sqrt(ar * ar + ai * ai);
    const D ua_r = select(a_zero, one, ar / a_norm);
    const D ua_i = select(a_zero, zero, ai / a_norm);
    const D ur = ua_r * cb - ua_i * sb;
    const D ui = ua_r * sb + ua_i * cb;
    const M hold = mask_and(a_zero, c_zero);
    ct = select(hold, ct, ui);
    st = select(hold, st, -ur);

    if (io.trace_estimate != nullptr && k.trace_stride != 0 && n % k.trace_stride == 0) {
      const std::size_t row = n / k.trace_stride;
      D est = atan2<B>(ci, cr) - D(coeff::kPiOver2);
      est = select(est <= D(-coeff::kPi), est + D(coeff::kTwoPi), est);
      est = select(c_zero, zero, est);
      B::store(io.trace_estimate + row * w + lane0, est);
      B::store(io.trace_theta + row * w + lane0, atan2<B>(st, ct));
    }

    if ((n & 1023) == 1023 || n + 1 == k.steps) {
      const M now_ok = mask_and(mask_and(is_finite<B>(x), is_finite<B>(y)),
                                mask_and(is_finite<B>(ar), is_finite<B>(br)));
      const M fresh_failure = mask_and(ok, mask_not(now_ok));
      if (any(fresh_failure)) {
        failed_at = select(fresh_failure, D(static_cast<double>(n)), failed_at);
        ok = mask_and(ok, now_ok);
      }
    }
  }

  B::store(io.sum_sq + lane0, sum_sq);
  B::store(io.sum_cos + lane0, sum_cos);
  B::store(io.sum_sin + lane0, sum_sin);
  double failed[B::kWidth];
  B::store(failed, failed_at);
  for (int i = 0; i < B::kWidth; ++i) {
    io.failed_step[lane0 + i] =
        failed[i] < 0.0 ? kNoFailure : static_cast<std::size_t>(failed[i]);
  }
  gx.store(io.rng_x + lane0, w);
  gy.store(io.rng_y + lane0, w);
}

template <class B>
void closed_loop(const LoopCoefficients& k, const LoopLanes& io) {
  for (std::size_t lane0 = 0; lane0 < io.lanes; lane0 += B::kWidth) {
    closed_loop_lanes<B>(k, io, lane0);
  }
}

template <class B>
void normal_pairs(std::uint64_t* rng, std::size_t lanes, std::size_t count, double* z0,
                  double* z1) {
  using D = typename B::D;
  for (std::size_t lane0 = 0; lane0 < lanes; lane0 += B::kWidth) {
    auto gen = simd::Xoshiro256Plus<B>::load(rng + lane0, lanes);
    for (std::size_t i = 0; i < count; ++i) {
      D a, b;
      simd::normal_pair(gen, a, b);
      B::store(z0 + i * lanes + lane0, a);
      B::store(z1 + i * lanes + lane0, b);
    }
    gen.store(rng + lane0, lanes);
  }
}

}  // namespace squeezetrack::kernels::detail
