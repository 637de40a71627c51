// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "squeezetrack/rng.hpp"

namespace squeezetrack {

/// Squeezed cavity driving the probe beam. x is always the squeezed
/// quadrature, so r >= 0.
struct CavityParams {
  double gamma = 1.0;
  double r = 0.0;
  double epsilon = 0.0;
  double E = 0.0;
  double flux = 0.0;

  /// Fills epsilon, E and flux from the total photon flux budget.
  static CavityParams from_flux(double flux, double gamma, double r);
};

double epsilon_from_r(double r);

/// N = E^2/4 + (gamma/2) sinh^2(r/2).
double photon_flux(double E, double gamma, double r);

/// Inverse of photon_flux in E. Throws FeasibilityError when the squeezing
/// flux alone exceeds `flux`.
double amplitude_from_flux(double flux, double gamma, double r);

/// Per-step constants of the exactly integrated quadrature equations.
struct StepCoefficients {
  double dt = 0.0;
  double sqrt_gamma = 0.0;
  double decay_x = 1.0, decay_y = 1.0;
  double m_x1 = 0.0, m_y1 = 0.0;
  double m_x2 = 0.0, m_y2 = 0.0;
  double var_chi_x = 0.0, var_chi_y = 0.0;
  double var_psi_x = 0.0, var_psi_y = 0.0;
  double cov_x = 0.0, cov_y = 0.0;
  double lambda_x = 0.0, lambda_y = 0.0;
  double var_omega_x = 0.0, var_omega_y = 0.0;
};

StepCoefficients step_coefficients(const CavityParams& params, double dt);

struct CavityState {
  double x = 0.0;
  double y = 0.0;
};

struct StepNoise {
  double chi_x = 0.0;
  double omega_x = 0.0;
  double chi_y = 0.0;
  double omega_y = 0.0;
};

/// One normal pair from each quadrature stream: (chi_x, omega_x) from
/// `x_stream` and (chi_y, omega_y) from `y_stream`.
StepNoise sample_step_noise(const StepCoefficients& coeffs, NormalStream& x_stream,
                            NormalStream& y_stream);

CavityState advance_cavity(const CavityState& state, const StepCoefficients& coeffs,
                           const StepNoise& noise);

/// Integrated homodyne photocurrent over one step, with the LO at theta and
/// the system phase phi held fixed during the step.
double measurement_increment(const CavityState& state, const StepCoefficients& coeffs, double E,
                             double phi, double theta, const StepNoise& noise);

/// Stationary standard deviations of x and y: 1/sqrt(1 +- epsilon).
double stationary_sd_x(const CavityParams& params);
double stationary_sd_y(const CavityParams& params);

struct EulerStep {
  CavityState state;
  double signal = 0.0;
};

/// Plain Euler-Maruyama step of the quadrature equations and the
/// photocurrent, used as an independent check of the exact integrator.
/// Draws one normal pair (dW_xi, dW_eta) from `rng`.
EulerStep euler_reference_step(const CavityState& state, const CavityParams& params,
                               double dt_sub, double phi, double theta, NormalStream& rng);

}  // namespace squeezetrack
