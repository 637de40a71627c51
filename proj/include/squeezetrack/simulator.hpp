// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "squeezetrack/feedback.hpp"
#include "squeezetrack/kernels/closed_loop.hpp"
#include "squeezetrack/spectrum.hpp"

namespace squeezetrack {

/// One closed-loop experiment. Rates are in units of kappa; the step is
/// dt = 1 / (1000 chi).
struct SimConfig {
  SpectrumParams spectrum{};
  double flux_over_kappa = 100.0;
  double gamma_over_kappa = 1.0;
  double chi_over_kappa = 1.0;
  double r = 0.0;
  double delta = 0.0;
  double warmup_multiple = 100.0;  // in units of 1/chi
  double total_multiple = 300.0;
  std::size_t runs = 64;
  std::uint64_t base_seed = 1;
  FilterUpdate filter_update = FilterUpdate::kLinearized;

  static constexpr double kStepsPerMemory = 1000.0;
  // At or above this flux the ensemble reports the standard MSE.
  static constexpr double kStandardMseFlux = 5e7;

  double chi() const { return chi_over_kappa * spectrum.kappa; }
  double gamma() const { return gamma_over_kappa * spectrum.kappa; }
  double flux() const { return flux_over_kappa * spectrum.kappa; }
  double dt() const { return 1.0 / (kStepsPerMemory * chi()); }
  std::size_t steps() const;
  std::size_t warmup_steps() const;
  std::size_t trace_stride() const;  // 1/(10 chi) in steps
};

/// Throws ValidationError (FeasibilityError for Condition 4) if the
/// configuration cannot be simulated.
void validate(const SimConfig& config);

struct ErrorStats {
  std::uint64_t count = 0;
  double sum_sq = 0.0;
  double sum_cos = 0.0;
  double sum_sin = 0.0;

  void add(double error);
  ErrorStats& merge(const ErrorStats& other);
};

/// (sum_cos / M)^-2 - 1; +infinity when sum_cos is zero.
double holevo_mse(const ErrorStats& stats);
double standard_mse(const ErrorStats& stats);

struct TracePoint {
  double t = 0.0;
  double phi = 0.0;
  double phi_est = 0.0;
  double theta = 0.0;
};

struct RunResult {
  ErrorStats stats;
  std::vector<TracePoint> trace;
  std::uint64_t seed = 0;  // phase-stream seed of the run
};

/// Phase trajectories shared between ensemble evaluations that differ only
/// in cavity or filter parameters (same spectrum, step and seeds).
class PhaseCache {
 public:
  explicit PhaseCache(std::size_t max_keys = 3) : max_keys_(max_keys) {}

  std::shared_ptr<const std::vector<double>> get(const SimConfig& config, std::size_t run_index);

 private:
  using Key = std::tuple<double, double, double, std::size_t, double, std::uint64_t>;
  std::mutex mutex_;
  std::size_t max_keys_;
  std::list<Key> order_;  // most recent first
  std::map<Key, std::map<std::size_t, std::shared_ptr<const std::vector<double>>>> entries_;
};

/// The run's system phase, one sample per loop step.
std::vector<double> run_phase(const SimConfig& config, std::size_t run_index);

/// Single trajectory through the module operations (reference path).
RunResult run_trajectory(const SimConfig& config, std::size_t run_index, bool trace = false);

struct EnsembleOptions {
  std::size_t workers = 0;  // 0: resolve_workers()
  kernels::Backend backend = kernels::best_backend();
  bool trace = false;
  PhaseCache* phase_cache = nullptr;
};

struct EnsembleResult {
  ErrorStats merged;
  std::vector<RunResult> runs;
  double standard_mse = 0.0;
  double holevo_mse = 0.0;
  double mse = 0.0;  // the form selected by flux
  bool holevo_selected = true;
  double stderr_mse = 0.0;  // across runs, NaN for one run
  std::uint64_t effective_samples = 0;
  kernels::Backend backend = kernels::Backend::kScalar;
};

EnsembleResult run_ensemble(const SimConfig& config, const EnsembleOptions& options = {});

}  // namespace squeezetrack
