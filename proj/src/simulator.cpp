// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "squeezetrack/cavity.hpp"
#include "squeezetrack/error.hpp"
#include "squeezetrack/parallel.hpp"
#include "squeezetrack/rng.hpp"

namespace squeezetrack {

namespace {

std::size_t multiple_to_steps(double multiple) {
  return static_cast<std::size_t>(std::ceil(multiple * SimConfig::kStepsPerMemory - 1e-9));
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be > 0");
}

struct Derived {
  CavityParams cavity;
  StepCoefficients step;
  kernels::LoopCoefficients loop;
};

Derived derive(const SimConfig& config) {
  Derived d;
  d.cavity = CavityParams::from_flux(config.flux(), config.gamma(), config.r);
  const double dt = config.dt();
  d.step = step_coefficients(d.cavity, dt);

  auto& k = d.loop;
  k.steps = config.steps();
  k.warmup_steps = config.warmup_steps();
  k.decay_x = d.step.decay_x;
  k.decay_y = d.step.decay_y;
  k.sqrt_gamma = d.step.sqrt_gamma;
  k.m_x1 = d.step.m_x1;
  k.m_x2 = d.step.m_x2;
  k.m_y1 = d.step.m_y1;
  k.m_y2 = d.step.m_y2;
  k.e_dt = d.cavity.E * dt;
  k.sd_chi_x = std::sqrt(d.step.var_chi_x);
  k.sd_omega_x = std::sqrt(std::fmax(d.step.var_omega_x, 0.0));
  k.sd_chi_y = std::sqrt(d.step.var_chi_y);
  k.sd_omega_y = std::sqrt(std::fmax(d.step.var_omega_y, 0.0));
  k.sd_x0 = stationary_sd_x(d.cavity);
  k.sd_y0 = stationary_sd_y(d.cavity);
  const double x = config.chi() * dt;
  if (config.filter_update == FilterUpdate::kExponential) {
    k.filter_decay = std::exp(-x);
    k.filter_gain = -std::expm1(-x) / x;
  } else {
    k.filter_decay = 1.0 - x;
    k.filter_gain = 1.0;
  }
  k.b_step = k.filter_gain * dt;
  k.chi = config.chi();
  k.blend = 1.0 - config.delta;
  return d;
}

void throw_non_finite(std::size_t run, std::size_t step) {
  throw NumericError("non-finite simulation state in run " + std::to_string(run) +
                     " by step " + std::to_string(step));
}

void finish(EnsembleResult& out, const SimConfig& config) {
  out.merged = ErrorStats{};
  for (const auto& run : out.runs) out.merged.merge(run.stats);
  out.standard_mse = standard_mse(out.merged);
  out.holevo_mse = holevo_mse(out.merged);
  out.holevo_selected = config.flux_over_kappa < SimConfig::kStandardMseFlux;
  out.mse = out.holevo_selected ? out.holevo_mse : out.standard_mse;

  const std::size_t n = out.runs.size();
  if (n < 2) {
    out.stderr_mse = std::numeric_limits<double>::quiet_NaN();
  } else {
    std::vector<double> per_run(n);
    for (std::size_t i = 0; i < n; ++i) {
      per_run[i] = out.holevo_selected ? holevo_mse(out.runs[i].stats)
                                       : standard_mse(out.runs[i].stats);
    }
    double mean = 0.0;
    for (double v : per_run) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : per_run) ss += (v - mean) * (v - mean);
    out.stderr_mse = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  out.effective_samples = static_cast<std::uint64_t>(std::llround(
      static_cast<double>(config.runs) * (config.total_multiple - config.warmup_multiple)));
}

}  // namespace

std::size_t SimConfig::steps() const { return multiple_to_steps(total_multiple); }
std::size_t SimConfig::warmup_steps() const { return multiple_to_steps(warmup_multiple); }
std::size_t SimConfig::trace_stride() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kStepsPerMemory / 10.0)));
}

void validate(const SimConfig& config) {
  validate(config.spectrum);
  if (!(config.spectrum.gamma_relax > 0.0)) {
    throw ValidationError("spectrum gamma_relax must be > 0 for phase synthesis");
  }
  check_positive(config.flux_over_kappa, "flux_over_kappa");
  check_positive(config.gamma_over_kappa, "gamma_over_kappa");
  check_positive(config.chi_over_kappa, "chi_over_kappa");
  if (!(config.r >= 0.0) || !std::isfinite(config.r)) throw ValidationError("r must be >= 0");
  if (!(config.delta >= 0.0 && config.delta <= 1.0)) {
    throw ValidationError("delta must lie in [0, 1]");
  }
  if (!(config.warmup_multiple >= 0.0) || !(config.total_multiple > config.warmup_multiple) ||
      !std::isfinite(config.total_multiple)) {
    throw ValidationError("need 0 <= warmup_multiple < total_multiple");
  }
  if (config.runs == 0) throw ValidationError("runs must be >= 1");
  amplitude_from_flux(config.flux(), config.gamma(), config.r);
}

void ErrorStats::add(double error) {
  ++count;
  sum_sq += error * error;
  sum_cos += std::cos(error);
  sum_sin += std::sin(error);
}

ErrorStats& ErrorStats::merge(const ErrorStats& other) {
  count += other.count;
  sum_sq += other.sum_sq;
  sum_cos += other.sum_cos;
  sum_sin += other.sum_sin;
  return *this;
}

double holevo_mse(const ErrorStats& stats) {
  if (stats.count == 0) throw ValidationError("holevo_mse of empty statistics");
  if (stats.sum_cos == 0.0) return std::numeric_limits<double>::infinity();
  const double mean_cos = stats.sum_cos / static_cast<double>(stats.count);
  return 1.0 / (mean_cos * mean_cos) - 1.0;
}

double standard_mse(const ErrorStats& stats) {
  if (stats.count == 0) throw ValidationError("standard_mse of empty statistics");
  return stats.sum_sq / static_cast<double>(stats.count);
}

std::vector<double> run_phase(const SimConfig& config, std::size_t run_index) {
  return generate_phase(config.spectrum, config.steps(), config.dt(),
                        stream_seed(config.base_seed, run_index, StreamTag::kPhase))
      .values;
}

std::shared_ptr<const std::vector<double>> PhaseCache::get(const SimConfig& config,
                                                           std::size_t run_index) {
  const Key key{config.spectrum.p, config.spectrum.kappa, config.spectrum.gamma_relax,
                config.steps(),    config.dt(),           config.base_seed};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      order_.remove(key);
      order_.push_front(key);
      auto run_it = it->second.find(run_index);
      if (run_it != it->second.end()) return run_it->second;
    }
  }
  auto phase = std::make_shared<const std::vector<double>>(run_phase(config, run_index));
  std::lock_guard<std::mutex> lock(mutex_);
  if (entries_.find(key) == entries_.end()) {
    order_.push_front(key);
    while (order_.size() > max_keys_) {
      entries_.erase(order_.back());
      order_.pop_back();
    }
  }
  entries_[key].emplace(run_index, phase);
  return phase;
}

RunResult run_trajectory(const SimConfig& config, std::size_t run_index, bool trace) {
  validate(config);
  const Derived d = derive(config);
  const std::vector<double> phi = run_phase(config, run_index);
  const std::size_t steps = config.steps();
  const std::size_t warmup = config.warmup_steps();
  const std::size_t stride = config.trace_stride();
  const double dt = config.dt();

  RunResult result;
  result.seed = stream_seed(config.base_seed, run_index, StreamTag::kPhase);
  NormalStream sx(stream_seed(config.base_seed, run_index, StreamTag::kQuadratureX));
  NormalStream sy(stream_seed(config.base_seed, run_index, StreamTag::kQuadratureY));
  CavityState state{sx.next_pair().first * d.loop.sd_x0, sy.next_pair().first * d.loop.sd_y0};
  FilterState filter;
  filter.chi = config.chi();
  filter.delta = config.delta;
  validate_filter(filter, dt);

  for (std::size_t n = 0; n < steps; ++n) {
    const StepNoise noise = sample_step_noise(d.step, sx, sy);
    const double dq = measurement_increment(state, d.step, d.cavity.E, phi[n], filter.theta, noise);
    state = advance_cavity(state, d.step, noise);
    filter = update_filters(filter, dq, dt, config.filter_update);
    const Readout ro = readout(filter);
    filter.theta = ro.theta;
    if (n >= warmup) result.stats.add(wrap_phase(ro.estimate - phi[n]));
    if (trace && n % stride == 0) {
      result.trace.push_back({static_cast<double>(n) * dt, phi[n], ro.estimate, ro.theta});
    }
    if ((n & 1023) == 1023 || n + 1 == steps) {
      if (!std::isfinite(state.x) || !std::isfinite(state.y) || !std::isfinite(filter.A.real()) ||
          !std::isfinite(filter.A.imag()) || !std::isfinite(filter.B.real())) {
        throw_non_finite(run_index, n);
      }
    }
  }
  return result;
}

EnsembleResult run_ensemble(const SimConfig& config, const EnsembleOptions& options) {
  validate(config);
  const std::size_t workers = resolve_workers(options.workers);
  EnsembleResult out;
  out.backend = options.backend;
  out.runs.resize(config.runs);

  if (options.backend == kernels::Backend::kReference) {
    parallel_for(config.runs, workers, [&](std::size_t i) {
      out.runs[i] = run_trajectory(config, i, options.trace);
    });
    finish(out, config);
    return out;
  }

  const Derived d = derive(config);
  kernels::LoopCoefficients k = d.loop;
  k.trace_stride = options.trace ? config.trace_stride() : 0;
  const std::size_t steps = k.steps;
  const std::size_t lanes = kernels::kGroupLanes;
  const std::size_t groups = (config.runs + lanes - 1) / lanes;
  const std::size_t sampled = steps - k.warmup_steps;
  const double dt = config.dt();

  parallel_for(groups, workers, [&](std::size_t g) {
    const std::size_t first = g * lanes;
    const std::size_t active = std::min(lanes, config.runs - first);
    std::vector<double> phi(steps * lanes, 0.0);
    std::vector<std::shared_ptr<const std::vector<double>>> phases(active);
    for (std::size_t l = 0; l < active; ++l) {
      phases[l] = options.phase_cache != nullptr
                      ? options.phase_cache->get(config, first + l)
                      : std::make_shared<const std::vector<double>>(run_phase(config, first + l));
      const auto& src = *phases[l];
      for (std::size_t n = 0; n < steps; ++n) phi[n * lanes + l] = src[n];
    }

    std::vector<std::uint64_t> rng_x(4 * lanes), rng_y(4 * lanes);
    for (std::size_t l = 0; l < lanes; ++l) {
      const auto sx = xoshiro_state(stream_seed(config.base_seed, first + l, StreamTag::kQuadratureX));
      const auto sy = xoshiro_state(stream_seed(config.base_seed, first + l, StreamTag::kQuadratureY));
      for (std::size_t w = 0; w < 4; ++w) {
        rng_x[w * lanes + l] = sx[w];
        rng_y[w * lanes + l] = sy[w];
      }
    }

    std::vector<double> sum_sq(lanes), sum_cos(lanes), sum_sin(lanes);
    std::vector<std::size_t> failed(lanes);
    std::vector<double> trace_est, trace_theta;
    const std::size_t rows = k.trace_stride ? (steps + k.trace_stride - 1) / k.trace_stride : 0;
    kernels::LoopLanes io;
    io.lanes = lanes;
    io.phi = phi.data();
    io.rng_x = rng_x.data();
    io.rng_y = rng_y.data();
    io.sum_sq = sum_sq.data();
    io.sum_cos = sum_cos.data();
    io.sum_sin = sum_sin.data();
    io.failed_step = failed.data();
    if (rows != 0) {
      trace_est.resize(rows * lanes);
      trace_theta.resize(rows * lanes);
      io.trace_estimate = trace_est.data();
      io.trace_theta = trace_theta.data();
    }
    kernels::run_closed_loop(options.backend, k, io);

    for (std::size_t l = 0; l < active; ++l) {
      if (failed[l] != kernels::kNoFailure) throw_non_finite(first + l, failed[l]);
      RunResult& run = out.runs[first + l];
      run.seed = stream_seed(config.base_seed, first + l, StreamTag::kPhase);
      run.stats = {sampled, sum_sq[l], sum_cos[l], sum_sin[l]};
      for (std::size_t row = 0; row < rows; ++row) {
        const std::size_t n = row * k.trace_stride;
        run.trace.push_back({static_cast<double>(n) * dt, (*phases[l])[n],
                             trace_est[row * lanes + l], trace_theta[row * lanes + l]});
      }
    }
  });

  finish(out, config);
  return out;
}

}  // namespace squeezetrack
