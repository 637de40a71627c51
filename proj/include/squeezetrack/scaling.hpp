// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace squeezetrack {

/// Multiplicative prefactors of the scaling laws. The laws fix only the
/// exponents; these are calibrated per p (see data/scaling_constants.json).
struct ScalingConstants {
  double er = 1.0;
  double chi = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double mse = 1.0;
  // Coherent-state baseline (r = 0, delta = 0).
  double coherent_chi = 1.0;
  double coherent_mse = 1.0;
};

/// Exponents of N/kappa for each quantity, as functions of p.
struct ScalingExponents {
  double er;     // (p-1)/(2p+2)
  double chi;    // 2/(p+1)
  double gamma;  // (p+3)/(2p+2)
  double delta;  // -(p-1)/(p+2)
  double mse;    // -2(p-1)/(p+1)
  double coherent_chi;  // 1/p
  double coherent_mse;  // -(p-1)/p
};

ScalingExponents scaling_exponents(double p);

struct ScalingPrediction {
  double p = 2.0;
  double flux_over_kappa = 1.0;
  double er = 1.0;
  double chi_over_kappa = 1.0;
  double gamma_over_kappa = 1.0;
  double delta = 1.0;
  double mse = 1.0;
  double sql_mse = 1.0;               // (kappa/N)^{(p-1)/p}
  double squeezed_tracking_mse = 1.0;  // (kappa e^{-2r}/N)^{1-1/p}
  ScalingConstants constants{};

  double r() const;
};

/// Heisenberg-scaling parameter set. Throws ValidationError for p <= 1 or
/// a nonpositive flux.
ScalingPrediction predict_parameters(double p, double flux_over_kappa,
                                     const ScalingConstants& constants = {});

/// Coherent-state baseline: r = 0, delta = 0, chi ~ (N/kappa)^{1/p}.
ScalingPrediction predict_coherent(double p, double flux_over_kappa,
                                   const ScalingConstants& constants = {});

/// Constant c_Z of the Heisenberg limit MSE ~ c_Z (kappa/N)^{2(p-1)/(p+1)}.
double heisenberg_constant(double p);

/// Constant c_A of the pulsed (sampling) scheme. Throws ValidationError as
/// p -> 1, where the (p+1)/(p-1) prefactor diverges.
double pulsed_constant(double p);
double pulsed_prefactor(double p);

inline constexpr double kHeisenbergLambda = 0.7246;  // quoted to 4 digits
inline constexpr double kAiryZero = -2.338;           // first zero of Ai, as quoted

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double stderr_exponent = 0.0;  // NaN with only two points
  std::size_t points = 0;
};

/// Least squares fit of log y = a log x + b.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct ConditionResult {
  std::string name;
  std::string relation;
  double ratio = 0.0;
  bool satisfied = false;
  std::string note;
};

struct ConditionReport {
  std::array<ConditionResult, 4> conditions;
  bool all_satisfied() const;
};

inline constexpr double kConditionBandLow = 0.1;
inline constexpr double kConditionBandHigh = 10.0;

ConditionReport check_conditions(const ScalingPrediction& prediction);

/// Reads the calibrated constants for exponent p from a JSON table of the
/// form {"entries": [{"p": 2, "er": ..., ...}, ...]}. Between tabulated
/// exponents the constants are interpolated linearly in log space; outside
/// the table a ValidationError is thrown.
ScalingConstants load_constants(const std::string& path, double p);

}  // namespace squeezetrack
