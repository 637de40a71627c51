// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace squeezetrack {

/// Power-law phase noise model: Sigma(w) = kappa^(p-1) / (|w|^p + Gamma^p).
struct SpectrumParams {
  double p = 2.0;
  double kappa = 1.0;
  double gamma_relax = 1e-3;
};

/// Throws ValidationError unless p > 1, kappa > 0 and gamma_relax >= 0.
void validate(const SpectrumParams& params);

double spectral_density(const SpectrumParams& params, double omega);

/// Stationary autocovariance <phi(t + tau) phi(t)> by adaptive quadrature
/// of the spectral density. Throws NumericError when the quadrature does not
/// converge.
double theoretical_autocovariance(const SpectrumParams& params, double tau);

struct NoiseDraws {
  std::vector<double> z1;
  std::vector<double> z2;
};

struct PhaseTrajectory {
  double dt = 0.0;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// FFT length used to synthesize n samples (next power of two).
std::size_t synthesis_length(std::size_t n);

/// `count` standard-normal pairs (z1[k], z2[k]) from the stream `seed`.
NoiseDraws draw_noise(std::size_t count, std::uint64_t seed);

/// Fourier synthesis of n samples spaced by dt. `draws` must hold at least
/// synthesis_length(n) entries in each sequence; z2[0] is ignored.
PhaseTrajectory generate_phase(const SpectrumParams& params, std::size_t n, double dt,
                               const NoiseDraws& draws, std::uint64_t seed = 0);

/// Convenience: draws the noise from `seed` and synthesizes.
PhaseTrajectory generate_phase(const SpectrumParams& params, std::size_t n, double dt,
                               std::uint64_t seed);

struct Periodogram {
  std::vector<double> omega;
  std::vector<double> power;
  // Expected value of `power` under the synthesis model, which folds the
  // density at w_m and w_{n-m} onto bin m.
  std::vector<double> expected;
};

/// Periodogram (dt/n)|DFT|^2 at bins m = 1..n/2, averaged over `seeds`
/// trajectories of length n (a power of two), using the phase streams of
/// runs 0 .. seeds-1 under base_seed.
Periodogram averaged_periodogram(const SpectrumParams& params, std::size_t n, double dt,
                                 std::size_t seeds, std::uint64_t base_seed);

}  // namespace squeezetrack
