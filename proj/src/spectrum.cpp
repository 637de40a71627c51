// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/spectrum.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "squeezetrack/error.hpp"
#include "squeezetrack/rng.hpp"

namespace squeezetrack {

namespace {

void gsl_quiet() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct WorkspaceFree {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
  void operator()(gsl_integration_qawo_table* t) const { gsl_integration_qawo_table_free(t); }
};

double density_callback(double omega, void* data) {
  return spectral_density(*static_cast<const SpectrumParams*>(data), omega);
}

constexpr std::size_t kQuadLimit = 4096;

// (1/pi) * integral over [0, inf) of Sigma(w), i.e. the variance.
double variance_by_quadrature(const SpectrumParams& params) {
  std::unique_ptr<gsl_integration_workspace, WorkspaceFree> ws(
      gsl_integration_workspace_alloc(kQuadLimit));
  gsl_function f{&density_callback, const_cast<SpectrumParams*>(&params)};
  double value = 0.0;
  double abserr = 0.0;
  const int status = gsl_integration_qagiu(&f, 0.0, 0.0, 1e-12, kQuadLimit, ws.get(), &value,
                                           &abserr);
  if (status != GSL_SUCCESS) {
    throw NumericError("autocovariance quadrature did not converge at tau=0 (error estimate " +
                       std::to_string(abserr / std::numbers::pi) + ")");
  }
  return value / std::numbers::pi;
}

}  // namespace

void validate(const SpectrumParams& params) {
  if (!(params.p > 1.0) || !std::isfinite(params.p)) {
    throw ValidationError("spectrum exponent p must be a finite number > 1");
  }
  if (!(params.kappa > 0.0) || !std::isfinite(params.kappa)) {
    throw ValidationError("spectrum kappa must be > 0");
  }
  if (!(params.gamma_relax >= 0.0) || !std::isfinite(params.gamma_relax)) {
    throw ValidationError("spectrum gamma_relax must be >= 0");
  }
}

double spectral_density(const SpectrumParams& params, double omega) {
  const double w = std::fabs(omega);
  return std::pow(params.kappa, params.p - 1.0) /
         (std::pow(w, params.p) + std::pow(params.gamma_relax, params.p));
}

double theoretical_autocovariance(const SpectrumParams& params, double tau) {
  validate(params);
  if (!(params.gamma_relax > 0.0)) {
    throw ValidationError("autocovariance requires gamma_relax > 0");
  }
  gsl_quiet();
  const double c0 = variance_by_quadrature(params);
  const double t = std::fabs(tau);
  if (t == 0.0) return c0;

  // Folded Fourier integral (1/pi) * int_0^inf cos(w t) Sigma(w) dw.
  std::unique_ptr<gsl_integration_workspace, WorkspaceFree> ws(
      gsl_integration_workspace_alloc(kQuadLimit));
  std::unique_ptr<gsl_integration_workspace, WorkspaceFree> cycles(
      gsl_integration_workspace_alloc(kQuadLimit));
  std::unique_ptr<gsl_integration_qawo_table, WorkspaceFree> table(
      gsl_integration_qawo_table_alloc(t, 1.0, GSL_INTEG_COSINE, 50));
  gsl_function f{&density_callback, const_cast<SpectrumParams*>(&params)};
  double value = 0.0;
  double abserr = 0.0;
  const double epsabs = 1e-10 * c0 * std::numbers::pi;
  const int status = gsl_integration_qawf(&f, 0.0, epsabs, kQuadLimit, ws.get(), cycles.get(),
                                          table.get(), &value, &abserr);
  if (status != GSL_SUCCESS) {
    throw NumericError("autocovariance quadrature did not converge at tau=" + std::to_string(tau) +
                       " (error estimate " + std::to_string(abserr / std::numbers::pi) + ")");
  }
  return value / std::numbers::pi;
}

std::size_t synthesis_length(std::size_t n) { return std::bit_ceil(n == 0 ? 1 : n); }

NoiseDraws draw_noise(std::size_t count, std::uint64_t seed) {
  NoiseDraws draws;
  draws.z1.resize(count);
  draws.z2.resize(count);
  NormalStream stream(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto [a, b] = stream.next_pair();
    draws.z1[k] = a;
    draws.z2[k] = b;
  }
  return draws;
}

PhaseTrajectory generate_phase(const SpectrumParams& params, std::size_t n, double dt,
                               const NoiseDraws& draws, std::uint64_t seed) {
  validate(params);
  if (!(params.gamma_relax > 0.0)) {
    throw ValidationError("phase synthesis requires gamma_relax > 0 (density diverges at w=0)");
  }
  if (n == 0) throw ValidationError("trajectory length must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  const std::size_t big_n = synthesis_length(n);
  if (draws.z1.size() < big_n || draws.z2.size() < big_n) {
    throw ValidationError("noise draws shorter than the synthesis length " +
                          std::to_string(big_n));
  }

  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(big_n) * dt);
  detail::FftBuffer in = detail::fft_alloc(big_n);
  detail::FftBuffer out = detail::fft_alloc(big_n);
  for (std::size_t k = 0; k < big_n; ++k) {
    const double a = std::sqrt(spectral_density(params, static_cast<double>(k) * d_omega));
    in[k][0] = a * draws.z1[k];
    in[k][1] = a * draws.z2[k];
  }
  in[0][0] *= 0.5;
  in[0][1] = 0.0;
  detail::fft_forward(big_n, in.get(), out.get());

  PhaseTrajectory traj;
  traj.dt = dt;
  traj.seed = seed;
  traj.values.resize(n);
  const double scale = std::sqrt(2.0 / (static_cast<double>(big_n) * dt));
  for (std::size_t j = 0; j < n; ++j) traj.values[j] = scale * out[j][0];
  return traj;
}

PhaseTrajectory generate_phase(const SpectrumParams& params, std::size_t n, double dt,
                               std::uint64_t seed) {
  return generate_phase(params, n, dt, draw_noise(synthesis_length(n), seed), seed);
}

Periodogram averaged_periodogram(const SpectrumParams& params, std::size_t n, double dt,
                                 std::size_t seeds, std::uint64_t base_seed) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw ValidationError("periodogram length must be a power of two >= 2");
  }
  if (seeds == 0) throw ValidationError("periodogram needs at least one seed");
  const std::size_t bins = n / 2;
  Periodogram pg;
  pg.omega.resize(bins);
  pg.power.assign(bins, 0.0);
  pg.expected.resize(bins);
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  for (std::size_t m = 1; m <= bins; ++m) {
    pg.omega[m - 1] = static_cast<double>(m) * d_omega;
    pg.expected[m - 1] = spectral_density(params, static_cast<double>(m) * d_omega) +
                         spectral_density(params, static_cast<double>(n - m) * d_omega);
  }

  detail::FftBuffer in = detail::fft_alloc(n);
  detail::FftBuffer out = detail::fft_alloc(n);
  for (std::size_t s = 0; s < seeds; ++s) {
    const PhaseTrajectory traj =
        generate_phase(params, n, dt, stream_seed(base_seed, s, StreamTag::kPhase));
    for (std::size_t j = 0; j < n; ++j) {
      in[j][0] = traj.values[j];
      in[j][1] = 0.0;
    }
    detail::fft_forward(n, in.get(), out.get());
    for (std::size_t m = 1; m <= bins; ++m) {
      const double re = out[m][0];
      const double im = out[m][1];
      pg.power[m - 1] += (re * re + im * im) * dt / static_cast<double>(n);
    }
  }
  for (double& v : pg.power) v /= static_cast<double>(seeds);
  return pg;
}

}  // namespace squeezetrack
