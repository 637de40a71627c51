// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "squeezetrack/kernels/closed_loop.hpp"
#include "squeezetrack/rng.hpp"
#include "squeezetrack/scaling.hpp"
#include "squeezetrack/simulator.hpp"

namespace squeezetrack {
namespace {

using kernels::Backend;

SimConfig config_for(double p, double flux) {
  SimConfig c;
  c.spectrum = {p, 1.0, 1e-3};
  const ScalingPrediction pred = predict_parameters(p, flux);
  c.flux_over_kappa = flux;
  c.chi_over_kappa = pred.chi_over_kappa;
  c.gamma_over_kappa = pred.gamma_over_kappa;
  c.r = pred.r();
  c.delta = pred.delta;
  c.warmup_multiple = 5.0;
  c.total_multiple = 20.0;
  c.runs = 11;  // not a multiple of the group size
  c.base_seed = 4242;
  return c;
}

std::vector<Backend> supported() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kAvx512}) {
    if (kernels::backend_supported(b)) out.push_back(b);
  }
  return out;
}

class KernelBackends : public ::testing::TestWithParam<double> {};

TEST_P(KernelBackends, EnsemblesAreBitIdentical) {
  const SimConfig c = config_for(GetParam(), 1e3);
  EnsembleOptions base;
  base.backend = Backend::kScalar;
  base.trace = true;
  const EnsembleResult ref = run_ensemble(c, base);
  for (Backend b : supported()) {
    EnsembleOptions opt = base;
    opt.backend = b;
    const EnsembleResult r = run_ensemble(c, opt);
    for (std::size_t i = 0; i < c.runs; ++i) {
      const auto& x = r.runs[i];
      const auto& y = ref.runs[i];
      ASSERT_EQ(std::memcmp(&x.stats.sum_sq, &y.stats.sum_sq, sizeof(double)), 0)
          << kernels::backend_name(b) << " run " << i;
      ASSERT_EQ(x.stats.sum_cos, y.stats.sum_cos);
      ASSERT_EQ(x.stats.sum_sin, y.stats.sum_sin);
      ASSERT_EQ(x.trace.size(), y.trace.size());
      for (std::size_t k = 0; k < x.trace.size(); ++k) {
        ASSERT_EQ(x.trace[k].phi_est, y.trace[k].phi_est);
        ASSERT_EQ(x.trace[k].theta, y.trace[k].theta);
      }
    }
  }
}

// The batched loop uses its own vectorized sin, cos, log and atan2, so it
// matches the reference path only to rounding; the per-run statistics
// must still agree closely.
TEST_P(KernelBackends, MatchesTheReferencePath) {
  const SimConfig c = config_for(GetParam(), 1e3);
  EnsembleOptions ref_opt, fast_opt;
  ref_opt.backend = Backend::kReference;
  fast_opt.backend = kernels::best_backend();
  const EnsembleResult ref = run_ensemble(c, ref_opt);
  const EnsembleResult fast = run_ensemble(c, fast_opt);
  for (std::size_t i = 0; i < c.runs; ++i) {
    const double a = holevo_mse(ref.runs[i].stats);
    const double b = holevo_mse(fast.runs[i].stats);
    EXPECT_NEAR(b, a, 1e-6 * a) << "run " << i;
    EXPECT_EQ(ref.runs[i].stats.count, fast.runs[i].stats.count);
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, KernelBackends, ::testing::Values(1.5, 2.0, 3.0));

// Direct kernel calls with hand-set coefficients, including lane counts
// beyond one group and a NaN injected into a single lane.
TEST(KernelEntryPoints, WidthVariantsAgreeBitwise) {
  const std::size_t lanes = 16, steps = 4000;
  kernels::LoopCoefficients k;
  k.steps = steps;
  k.warmup_steps = 500;
  k.decay_x = 0.99;
  k.decay_y = 0.995;
  k.sqrt_gamma = 3.0;
  k.m_x1 = 0.01;
  k.m_x2 = 0.002;
  k.m_y1 = 0.012;
  k.m_y2 = 0.003;
  k.e_dt = 0.05;
  k.sd_chi_x = 0.1;
  k.sd_omega_x = 0.01;
  k.sd_chi_y = 0.12;
  k.sd_omega_y = 0.02;
  k.filter_decay = 0.999;
  k.filter_gain = 1.0;
  k.b_step = 1e-3;
  k.chi = 1.0;
  k.blend = 0.6;
  k.trace_stride = 100;

  std::vector<double> phi(steps * lanes);
  NormalStream walk(9);
  for (std::size_t l = 0; l < lanes; ++l) {
    double v = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
      v += 0.01 * walk.next_pair().first;
      phi[n * lanes + l] = v;
    }
  }
  phi[1234 * lanes + 5] = std::nan("");

  struct Out {
    std::vector<double> sq, cs, sn, est, th;
    std::vector<std::size_t> failed;
  };
  auto run = [&](void (*fn)(const kernels::LoopCoefficients&, const kernels::LoopLanes&)) {
    Out o;
    o.sq.resize(lanes);
    o.cs.resize(lanes);
    o.sn.resize(lanes);
    o.failed.resize(lanes);
    o.est.resize(40 * lanes);
    o.th.resize(40 * lanes);
    std::vector<std::uint64_t> rx(4 * lanes), ry(4 * lanes);
    for (std::size_t l = 0; l < lanes; ++l) {
      const auto sx = xoshiro_state(1000 + l), sy = xoshiro_state(2000 + l);
      for (std::size_t w = 0; w < 4; ++w) {
        rx[w * lanes + l] = sx[w];
        ry[w * lanes + l] = sy[w];
      }
    }
    kernels::LoopLanes io;
    io.lanes = lanes;
    io.phi = phi.data();
    io.rng_x = rx.data();
    io.rng_y = ry.data();
    io.sum_sq = o.sq.data();
    io.sum_cos = o.cs.data();
    io.sum_sin = o.sn.data();
    io.failed_step = o.failed.data();
    io.trace_estimate = o.est.data();
    io.trace_theta = o.th.data();
    fn(k, io);
    return o;
  };

  const Out ref = run(kernels::run_closed_loop_scalar);
  EXPECT_NE(ref.failed[5], kernels::kNoFailure);
  EXPECT_LE(ref.failed[5], 2047u);
  for (std::size_t l = 0; l < lanes; ++l) {
    if (l != 5) {
      EXPECT_EQ(ref.failed[l], kernels::kNoFailure) << l;
    }
  }

  std::vector<void (*)(const kernels::LoopCoefficients&, const kernels::LoopLanes&)> variants;
  if (kernels::backend_supported(Backend::kAvx2)) variants.push_back(kernels::run_closed_loop_avx2);
  if (kernels::backend_supported(Backend::kAvx512)) {
    variants.push_back(kernels::run_closed_loop_avx512);
  }
  for (auto fn : variants) {
    const Out o = run(fn);
    EXPECT_EQ(o.failed, ref.failed);
    for (std::size_t l = 0; l < lanes; ++l) {
      if (l == 5) continue;
      EXPECT_EQ(o.sq[l], ref.sq[l]);
      EXPECT_EQ(o.cs[l], ref.cs[l]);
      EXPECT_EQ(o.sn[l], ref.sn[l]);
    }
    for (std::size_t i = 0; i < o.est.size(); ++i) {
      if (i % lanes == 5) continue;
      ASSERT_EQ(o.est[i], ref.est[i]) << i;
      ASSERT_EQ(o.th[i], ref.th[i]) << i;
    }
  }
}

TEST(KernelEntryPoints, ReferenceBackendIsNotAKernel) {
  kernels::LoopCoefficients k;
  kernels::LoopLanes io;
  EXPECT_ANY_THROW(kernels::run_closed_loop(Backend::kReference, k, io));
}

}  // namespace
}  // namespace squeezetrack
