// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "squeezetrack/error.hpp"
#include "squeezetrack/scaling.hpp"
#include "squeezetrack/simulator.hpp"

namespace squeezetrack {
namespace {

SimConfig small_config() {
  SimConfig c;
  c.spectrum = {2.0, 1.0, 1e-3};
  const ScalingPrediction pred = predict_parameters(2.0, 1e3);
  c.flux_over_kappa = 1e3;
  c.chi_over_kappa = pred.chi_over_kappa;
  c.gamma_over_kappa = pred.gamma_over_kappa;
  c.r = pred.r();
  c.delta = pred.delta;
  c.warmup_multiple = 10.0;
  c.total_multiple = 30.0;
  c.runs = 10;
  c.base_seed = 77;
  return c;
}

void expect_same(const EnsembleResult& a, const EnsembleResult& b) {
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].stats.count, b.runs[i].stats.count);
    EXPECT_EQ(a.runs[i].stats.sum_sq, b.runs[i].stats.sum_sq) << i;
    EXPECT_EQ(a.runs[i].stats.sum_cos, b.runs[i].stats.sum_cos) << i;
    EXPECT_EQ(a.runs[i].stats.sum_sin, b.runs[i].stats.sum_sin) << i;
  }
  EXPECT_EQ(a.mse, b.mse);
}

TEST(Estimators, HolevoOfSmallGaussianErrorsMatchesVariance) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n(0.0, 0.1);
  ErrorStats s;
  for (int i = 0; i < 200000; ++i) s.add(n(gen));
  EXPECT_NEAR(holevo_mse(s), 0.01, 0.05 * 0.01);
  EXPECT_NEAR(standard_mse(s), 0.01, 0.05 * 0.01);
}

TEST(Estimators, ExactValues) {
  ErrorStats zero;
  for (int i = 0; i < 10; ++i) zero.add(0.0);
  EXPECT_EQ(holevo_mse(zero), 0.0);
  EXPECT_EQ(standard_mse(zero), 0.0);

  ErrorStats third;
  for (int i = 0; i < 10; ++i) third.add(std::numbers::pi / 3.0);
  EXPECT_NEAR(holevo_mse(third), 3.0, 1e-12);
  EXPECT_NEAR(standard_mse(third), std::numbers::pi * std::numbers::pi / 9.0, 1e-14);

  ErrorStats quarter;
  quarter.add(std::numbers::pi / 2.0);
  quarter.add(-std::numbers::pi / 2.0);
  quarter.sum_cos = 0.0;
  EXPECT_TRUE(std::isinf(holevo_mse(quarter)));

  EXPECT_THROW(holevo_mse(ErrorStats{}), ValidationError);
  EXPECT_THROW(standard_mse(ErrorStats{}), ValidationError);
}

TEST(Estimators, MergeIsAdditive) {
  ErrorStats a, b, all;
  for (double e : {0.1, -0.3, 0.2}) {
    a.add(e);
    all.add(e);
  }
  for (double e : {1.0, -0.05}) {
    b.add(e);
    all.add(e);
  }
  a.merge(b);
  EXPECT_EQ(a.count, all.count);
  EXPECT_DOUBLE_EQ(a.sum_sq, all.sum_sq);
  EXPECT_DOUBLE_EQ(a.sum_cos, all.sum_cos);
  EXPECT_DOUBLE_EQ(a.sum_sin, all.sum_sin);
}

TEST(SimConfig, StepCountsFollowTheMemoryTime) {
  SimConfig c = small_config();
  EXPECT_DOUBLE_EQ(c.dt(), 1.0 / (1000.0 * c.chi()));
  EXPECT_EQ(c.steps(), 30000u);
  EXPECT_EQ(c.warmup_steps(), 10000u);
  EXPECT_EQ(c.trace_stride(), 100u);
}

TEST(Validate, RejectsBadConfigurations) {
  EXPECT_NO_THROW(validate(small_config()));
  SimConfig c = small_config();
  c.r = -0.1;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.delta = 1.2;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.total_multiple = c.warmup_multiple;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.runs = 0;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.spectrum.gamma_relax = 0.0;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.spectrum.p = 1.0;
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(Validate, SqueezingBeyondTheFluxBudgetIsInfeasible) {
  SimConfig c = small_config();
  c.gamma_over_kappa = 1e4;
  c.r = 3.0;
  EXPECT_THROW(validate(c), FeasibilityError);
  EXPECT_THROW(run_ensemble(c), FeasibilityError);
}

TEST(Ensemble, DeterministicForAFixedSeed) {
  const SimConfig c = small_config();
  expect_same(run_ensemble(c), run_ensemble(c));
  SimConfig other = c;
  other.base_seed = 78;
  EXPECT_NE(run_ensemble(other).mse, run_ensemble(c).mse);
}

TEST(Ensemble, WorkerCountDoesNotChangeResults) {
  const SimConfig c = small_config();
  EnsembleOptions one, many;
  one.workers = 1;
  many.workers = 4;
  expect_same(run_ensemble(c, one), run_ensemble(c, many));
}

TEST(Ensemble, RunsAreIndependentOfEnsembleSize) {
  SimConfig c = small_config();
  const EnsembleResult big = run_ensemble(c);
  c.runs = 3;
  const EnsembleResult small = run_ensemble(c);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(small.runs[i].stats.sum_cos, big.runs[i].stats.sum_cos);
    EXPECT_EQ(small.runs[i].seed, big.runs[i].seed);
  }
}

TEST(Ensemble, ReportsAggregates) {
  const SimConfig c = small_config();
  const EnsembleResult r = run_ensemble(c);
  EXPECT_TRUE(r.holevo_selected);
  EXPECT_EQ(r.mse, r.holevo_mse);
  EXPECT_EQ(r.effective_samples, 10u * 20u);
  EXPECT_EQ(r.merged.count, 10u * 20000u);
  EXPECT_GT(r.stderr_mse, 0.0);
  EXPECT_LT(r.stderr_mse, r.mse);
  // Tracking at this flux beats a uniformly random guess by orders of magnitude.
  EXPECT_LT(r.mse, 0.2);
  EXPECT_GT(r.mse, 1e-4);

  SimConfig one = c;
  one.runs = 1;
  EXPECT_TRUE(std::isnan(run_ensemble(one).stderr_mse));
}

TEST(Ensemble, QuadruplingRunsHalvesTheStandardError) {
  SimConfig c = small_config();
  c.runs = 40;
  const double se_small = run_ensemble(c, {}).stderr_mse;
  c.runs = 160;
  const double se_large = run_ensemble(c, {}).stderr_mse;
  EXPECT_NEAR(se_small / se_large, 2.0, 0.6);
}

TEST(Ensemble, HighFluxSelectsTheStandardForm) {
  SimConfig c = small_config();
  c.flux_over_kappa = SimConfig::kStandardMseFlux;
  c.runs = 1;
  c.total_multiple = 12.0;
  const EnsembleResult r = run_ensemble(c);
  EXPECT_FALSE(r.holevo_selected);
  EXPECT_EQ(r.mse, r.standard_mse);
}

TEST(Ensemble, PhaseCacheIsTransparent) {
  const SimConfig c = small_config();
  PhaseCache cache(2);
  EnsembleOptions cached;
  cached.phase_cache = &cache;
  const EnsembleResult a = run_ensemble(c, cached);
  expect_same(a, run_ensemble(c));

  // A different cavity point reuses the stored phases.
  SimConfig moved = c;
  moved.delta = 0.5 * c.delta;
  expect_same(run_ensemble(moved, cached), run_ensemble(moved));

  EXPECT_EQ(*cache.get(c, 4), run_phase(c, 4));
  EXPECT_EQ(cache.get(c, 4).get(), cache.get(c, 4).get());
}

TEST(Ensemble, TraceSamplesEveryTenthMemoryTime) {
  SimConfig c = small_config();
  c.runs = 2;
  EnsembleOptions opt;
  opt.trace = true;
  const EnsembleResult r = run_ensemble(c, opt);
  ASSERT_EQ(r.runs[0].trace.size(), 300u);
  const auto phi = run_phase(c, 1);
  EXPECT_EQ(r.runs[1].trace[7].phi, phi[700]);
  EXPECT_DOUBLE_EQ(r.runs[1].trace[7].t, 700 * c.dt());
  for (const auto& tp : r.runs[0].trace) {
    EXPECT_LE(std::fabs(tp.phi_est), std::numbers::pi);
    EXPECT_LE(std::fabs(tp.theta), std::numbers::pi);
  }
}

TEST(Ensemble, ExponentialUpdateAgreesStatistically) {
  SimConfig c = small_config();
  c.runs = 16;
  const EnsembleResult lin = run_ensemble(c);
  c.filter_update = FilterUpdate::kExponential;
  const EnsembleResult ex = run_ensemble(c);
  EXPECT_NEAR(ex.mse, lin.mse, 4.0 * std::hypot(lin.stderr_mse, ex.stderr_mse));
}

}  // namespace
}  // namespace squeezetrack
