// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/cavity.hpp"

#include <cmath>
#include <string>

#include "squeezetrack/error.hpp"

namespace squeezetrack {

namespace {

void check_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be a finite number >= 0");
  }
}

double squeezing_flux(double gamma, double r) {
  const double s = std::sinh(0.5 * r);
  return 0.5 * gamma * s * s;
}

}  // namespace

double epsilon_from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw ValidationError("squeezing parameter r must be >= 0");
  }
  // tanh(r/2) == (e^r - 1)/(e^r + 1) without cancellation at small r.
  return std::tanh(0.5 * r);
}

double photon_flux(double E, double gamma, double r) {
  check_nonnegative(E, "amplitude E");
  check_nonnegative(gamma, "gamma");
  check_nonnegative(r, "r");
  return 0.25 * E * E + squeezing_flux(gamma, r);
}

double amplitude_from_flux(double flux, double gamma, double r) {
  check_nonnegative(flux, "photon flux");
  check_nonnegative(gamma, "gamma");
  check_nonnegative(r, "r");
  const double sq = squeezing_flux(gamma, r);
  if (sq > flux) {
    throw FeasibilityError("squeezing flux exceeds budget (Condition 4): (gamma/2) sinh^2(r/2) = " +
                           std::to_string(sq) + " > N = " + std::to_string(flux));
  }
  return 2.0 * std::sqrt(flux - sq);
}

CavityParams CavityParams::from_flux(double flux, double gamma, double r) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be > 0");
  CavityParams p;
  p.gamma = gamma;
  p.r = r;
  p.epsilon = epsilon_from_r(r);
  p.E = amplitude_from_flux(flux, gamma, r);
  p.flux = flux;
  return p;
}

StepCoefficients step_coefficients(const CavityParams& params, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("step dt must be > 0");
  if (!(params.gamma > 0.0)) throw ValidationError("gamma must be > 0");
  const double g = params.gamma;
  const double eps = epsilon_from_r(params.r);
  const double emr = std::exp(-params.r);
  const double epr = std::exp(params.r);

  StepCoefficients c;
  c.dt = dt;
  c.sqrt_gamma = std::sqrt(g);
  const double ax = 0.5 * g * (1.0 + eps) * dt;
  const double ay = 0.5 * g * (1.0 - eps) * dt;
  c.decay_x = std::exp(-ax);
  c.decay_y = std::exp(-ay);
  // 1 - e^{-a} and 1 - e^{-2a}, accurate for small steps.
  const double one_x = -std::expm1(-ax);
  const double one_y = -std::expm1(-ay);
  const double two_x = -std::expm1(-2.0 * ax);
  const double two_y = -std::expm1(-2.0 * ay);

  c.m_x1 = (emr + 1.0) * one_x / c.sqrt_gamma;
  c.m_y1 = (epr + 1.0) * one_y / c.sqrt_gamma;
  c.var_chi_x = (emr + 1.0) * two_x / (2.0 * g);
  c.var_chi_y = (epr + 1.0) * two_y / (2.0 * g);
  c.var_psi_x = emr * emr * dt;
  c.var_psi_y = epr * epr * dt;
  c.cov_x = emr * (emr + 1.0) * one_x / g;
  c.cov_y = epr * (epr + 1.0) * one_y / g;
  c.lambda_x = c.cov_x / c.var_chi_x;
  c.lambda_y = c.cov_y / c.var_chi_y;
  c.var_omega_x = c.var_psi_x - c.lambda_x * c.lambda_x * c.var_chi_x;
  c.var_omega_y = c.var_psi_y - c.lambda_y * c.lambda_y * c.var_chi_y;
  c.m_x2 = c.lambda_x - emr - 1.0;
  c.m_y2 = c.lambda_y - epr - 1.0;
  return c;
}

StepNoise sample_step_noise(const StepCoefficients& coeffs, NormalStream& x_stream,
                            NormalStream& y_stream) {
  const auto [ax, bx] = x_stream.next_pair();
  const auto [ay, by] = y_stream.next_pair();
  // Round-off can push the residual variance a hair below zero.
  const double sd_omega_x = std::sqrt(std::fmax(coeffs.var_omega_x, 0.0));
  const double sd_omega_y = std::sqrt(std::fmax(coeffs.var_omega_y, 0.0));
  return {ax * std::sqrt(coeffs.var_chi_x), bx * sd_omega_x, ay * std::sqrt(coeffs.var_chi_y),
          by * sd_omega_y};
}

CavityState advance_cavity(const CavityState& state, const StepCoefficients& coeffs,
                           const StepNoise& noise) {
  return {coeffs.decay_x * state.x + coeffs.sqrt_gamma * noise.chi_x,
          coeffs.decay_y * state.y + coeffs.sqrt_gamma * noise.chi_y};
}

double measurement_increment(const CavityState& state, const StepCoefficients& coeffs, double E,
                             double phi, double theta, const StepNoise& noise) {
  const double d = theta - phi;
  return std::cos(d) * (coeffs.m_x1 * state.x + noise.omega_x + coeffs.m_x2 * noise.chi_x) +
         std::sin(d) * (coeffs.m_y1 * state.y + E * coeffs.dt + noise.omega_y +
                        coeffs.m_y2 * noise.chi_y);
}

double stationary_sd_x(const CavityParams& params) {
  return 1.0 / std::sqrt(1.0 + epsilon_from_r(params.r));
}

double stationary_sd_y(const CavityParams& params) {
  return 1.0 / std::sqrt(1.0 - epsilon_from_r(params.r));
}

EulerStep euler_reference_step(const CavityState& state, const CavityParams& params,
                               double dt_sub, double phi, double theta, NormalStream& rng) {
  const double eps = epsilon_from_r(params.r);
  const double sg = std::sqrt(params.gamma);
  const auto [a, b] = rng.next_pair();
  const double sq = std::sqrt(dt_sub);
  const double dw_xi = a * sq;
  const double dw_eta = b * sq;
  const double d = theta - phi;
  EulerStep out;
  out.signal = std::cos(d) * (sg * state.x * dt_sub - dw_xi) +
               std::sin(d) * (sg * state.y * dt_sub + params.E * dt_sub - dw_eta);
  out.state.x = state.x - 0.5 * params.gamma * (1.0 + eps) * state.x * dt_sub + sg * dw_xi;
  out.state.y = state.y - 0.5 * params.gamma * (1.0 - eps) * state.y * dt_sub + sg * dw_eta;
  return out;
}

}  // namespace squeezetrack
