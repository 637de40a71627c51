// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/feedback.hpp"

#include <cmath>

#include "squeezetrack/error.hpp"

namespace squeezetrack {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_zero(std::complex<double> z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Blend of arg A and arg C before any quadrature rotation.
double blended_phase(std::complex<double> a, std::complex<double> c, double delta) {
  const double arg_a = is_zero(a) ? 0.0 : std::arg(a);
  const double arg_c = is_zero(c) ? 0.0 : std::arg(c);
  return wrap_phase(arg_a + (1.0 - delta) * wrap_phase(arg_c - arg_a));
}

}  // namespace

double wrap_phase(double angle) {
  if (angle > -kPi && angle <= kPi) return angle;
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

void validate_filter(const FilterState& state, double dt) {
  if (!(state.chi > 0.0) || !std::isfinite(state.chi)) {
    throw ValidationError("memory rate chi must be > 0");
  }
  if (!(state.delta >= 0.0 && state.delta <= 1.0)) {
    throw ValidationError("blend delta must lie in [0, 1]");
  }
  if (!(state.chi * dt < 1.0)) {
    throw ValidationError("filter unstable: chi * dt must be < 1");
  }
}

FilterState update_filters(const FilterState& state, double dq, double dt, FilterUpdate mode) {
  validate_filter(state, dt);
  double forget = 1.0 - state.chi * dt;
  double gain = 1.0;
  if (mode == FilterUpdate::kExponential) {
    const double x = state.chi * dt;
    forget = std::exp(-x);
    gain = -std::expm1(-x) / x;
  }
  const std::complex<double> lo = std::polar(1.0, state.theta);
  FilterState next = state;
  next.A = forget * state.A + (gain * dq) * lo;
  next.B = forget * state.B - (gain * dt) * (lo * lo);
  return next;
}

std::complex<double> combined_estimate(const FilterState& state) {
  return state.A + state.chi * state.B * std::conj(state.A);
}

double phase_estimate(const FilterState& state) {
  const std::complex<double> c = combined_estimate(state);
  return is_zero(c) ? 0.0 : std::arg(c);
}

double lo_phase(const FilterState& state) {
  const std::complex<double> c = combined_estimate(state);
  if (is_zero(state.A) && is_zero(c)) return state.theta;
  return blended_phase(state.A, c, state.delta);
}

Readout readout(const FilterState& state, double quadrature_offset) {
  const std::complex<double> c = combined_estimate(state);
  Readout out;
  out.estimate = is_zero(c) ? 0.0 : wrap_phase(std::arg(c) - quadrature_offset);
  out.theta = (is_zero(state.A) && is_zero(c))
                  ? state.theta
                  : wrap_phase(blended_phase(state.A, c, state.delta) - quadrature_offset);
  return out;
}

}  // namespace squeezetrack
