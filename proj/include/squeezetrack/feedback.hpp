// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>

namespace squeezetrack {

enum class FilterUpdate {
  kLinearized,   // (1 - chi dt) forgetting, the default
  kExponential,  // e^{-chi dt} forgetting with the matching gain
};

struct FilterState {
  std::complex<double> A{0.0, 0.0};
  std::complex<double> B{0.0, 0.0};
  double chi = 1.0;
  double delta = 0.0;
  double theta = 0.0;
};

/// Wraps an angle to (-pi, pi].
double wrap_phase(double angle);

/// Throws ValidationError unless chi > 0, 0 <= delta <= 1 and chi dt < 1.
void validate_filter(const FilterState& state, double dt);

/// A' = (1 - chi dt) A + dQ e^{i theta};  B' = (1 - chi dt) B - e^{2 i theta} dt.
/// Uses the theta stored in `state`, which is left unchanged.
FilterState update_filters(const FilterState& state, double dq, double dt,
                           FilterUpdate mode = FilterUpdate::kLinearized);

/// C = A + chi B conj(A).
std::complex<double> combined_estimate(const FilterState& state);

/// arg C, or 0 when C vanishes.
double phase_estimate(const FilterState& state);

/// arg A + (1 - delta) wrap(arg C - arg A), reduced to (-pi, pi]. Holds the
/// stored theta when both A and C vanish.
double lo_phase(const FilterState& state);

/// With the photocurrent convention of the cavity model (signal proportional
/// to sin(theta - phi)), arg C settles a quarter turn ahead of the system
/// phase. The closed loop reads the estimate and sets the LO this far back.
inline constexpr double kSineQuadratureOffset = std::numbers::pi / 2.0;

struct Readout {
  double estimate = 0.0;
  double theta = 0.0;
};

/// Estimate and next LO phase, both rotated back by `quadrature_offset`.
Readout readout(const FilterState& state, double quadrature_offset = kSineQuadratureOffset);

}  // namespace squeezetrack
