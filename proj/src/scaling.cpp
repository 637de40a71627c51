// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

#include "squeezetrack/error.hpp"

namespace squeezetrack {

namespace {

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("exponent p must be > 1");
}

void check_flux(double flux) {
  if (!(flux > 0.0) || !std::isfinite(flux)) throw ValidationError("flux_over_kappa must be > 0");
}

bool in_band(double ratio) { return ratio >= kConditionBandLow && ratio <= kConditionBandHigh; }

}  // namespace

ScalingExponents scaling_exponents(double p) {
  check_p(p);
  return {(p - 1.0) / (2.0 * p + 2.0),  2.0 / (p + 1.0),      (p + 3.0) / (2.0 * p + 2.0),
          -(p - 1.0) / (p + 2.0),       -2.0 * (p - 1.0) / (p + 1.0),
          1.0 / p,                      -(p - 1.0) / p};
}

double ScalingPrediction::r() const { return std::log(er); }

ScalingPrediction predict_parameters(double p, double flux_over_kappa,
                                     const ScalingConstants& constants) {
  const ScalingExponents e = scaling_exponents(p);
  check_flux(flux_over_kappa);
  const double n = flux_over_kappa;
  ScalingPrediction s;
  s.p = p;
  s.flux_over_kappa = n;
  s.constants = constants;
  s.er = constants.er * std::pow(n, e.er);
  s.chi_over_kappa = constants.chi * std::pow(n, e.chi);
  s.gamma_over_kappa = constants.gamma * std::pow(n, e.gamma);
  s.delta = constants.delta * std::pow(n, e.delta);
  s.mse = constants.mse * std::pow(n, e.mse);
  s.sql_mse = std::pow(n, e.coherent_mse);
  s.squeezed_tracking_mse = std::pow(1.0 / (s.er * s.er * n), 1.0 - 1.0 / p);
  return s;
}

ScalingPrediction predict_coherent(double p, double flux_over_kappa,
                                   const ScalingConstants& constants) {
  ScalingPrediction s = predict_parameters(p, flux_over_kappa, constants);
  const ScalingExponents e = scaling_exponents(p);
  s.er = 1.0;
  s.delta = 0.0;
  s.chi_over_kappa = constants.coherent_chi * std::pow(flux_over_kappa, e.coherent_chi);
  s.mse = constants.coherent_mse * std::pow(flux_over_kappa, e.coherent_mse);
  s.squeezed_tracking_mse = s.sql_mse;
  return s;
}

double heisenberg_constant(double p) {
  check_p(p);
  const double p3 = (p + 1.0) * (p + 2.0) * (p + 3.0);
  return (11.0 / 420.0) * std::pow(p3 / 4.0, 2.0 / (p + 1.0)) *
         std::pow(1.0 / (4.0 * std::numbers::pi * kHeisenbergLambda),
                  2.0 * (p - 1.0) / (p + 1.0));
}

double pulsed_prefactor(double p) {
  check_p(p);
  const double f = (p + 1.0) / (p - 1.0);
  if (!std::isfinite(f) || f > 1e12) {
    throw ValidationError("pulsed constant diverges as p -> 1 (prefactor (p+1)/(p-1))");
  }
  return f;
}

double pulsed_constant(double p) {
  const double z3 = std::fabs(kAiryZero) * std::fabs(kAiryZero) * std::fabs(kAiryZero);
  return pulsed_prefactor(p) * std::pow(4.0 * z3 / 27.0, (p - 1.0) / (p + 1.0)) *
         std::pow(std::numbers::pi, 2.0 * p / (p + 1.0));
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw ValidationError("power-law fit needs positive finite x and y");
    }
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  if (n < 2) throw ValidationError("power-law fit needs at least two distinct x values");
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("power-law fit needs at least two distinct x values");
  PowerLawFit fit;
  fit.points = n;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  if (n > 2) {
    double rss = 0.0;
    for (const auto& [x, y] : points) {
      const double res = std::log(y) - (my + fit.exponent * (std::log(x) - mx));
      rss += res * res;
    }
    fit.stderr_exponent = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  } else {
    fit.stderr_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

bool ConditionReport::all_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.satisfied; });
}

ConditionReport check_conditions(const ScalingPrediction& s) {
  check_p(s.p);
  const double n = s.flux_over_kappa;
  const double er = s.er;
  const double chi = s.chi_over_kappa;
  ConditionReport report;

  auto& c1 = report.conditions[0];
  c1.name = "Condition 1";
  c1.relation = "chi e^{-2r}/N ~ (kappa/chi)^{p-1}";
  c1.ratio = (chi / (er * er * n)) / std::pow(1.0 / chi, s.p - 1.0);
  c1.satisfied = in_band(c1.ratio);
  c1.note = c1.satisfied ? "within band" : "filter bandwidth mismatched to squeezed noise";

  auto& c2 = report.conditions[1];
  c2.name = "Condition 2";
  c2.relation = "e^{-4r} ~ MSE";
  c2.ratio = std::pow(er, -4.0) / s.mse;
  c2.satisfied = in_band(c2.ratio);
  c2.note = c2.satisfied ? "within band"
                         : (c2.ratio > kConditionBandHigh ? "under-squeezed" : "over-squeezed");

  auto& c3 = report.conditions[2];
  c3.name = "Condition 3";
  c3.relation = "chi e^r <= gamma";
  c3.ratio = chi * er / s.gamma_over_kappa;
  c3.satisfied = c3.ratio <= 1.0 + 1e-12;
  c3.note = c3.satisfied ? "holds" : "cavity too slow for the filter bandwidth";

  auto& c4 = report.conditions[3];
  c4.name = "Condition 4";
  c4.relation = "gamma e^r ~ N, (gamma/2) sinh^2(r/2) <= N";
  c4.ratio = s.gamma_over_kappa * er / n;
  const double sh = std::sinh(0.5 * std::log(er));
  const bool feasible = 0.5 * s.gamma_over_kappa * sh * sh <= n;
  c4.satisfied = in_band(c4.ratio) && feasible;
  c4.note = !feasible ? "squeezing flux exceeds budget"
                      : (c4.satisfied ? "within band" : "outside band");
  return report;
}

ScalingConstants load_constants(const std::string& path, double p) {
  check_p(p);
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open constants file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("constants file '" + path + "' is not valid JSON: " + e.what());
  }
  std::map<double, ScalingConstants> table;
  try {
    for (const auto& entry : doc.at("entries")) {
      ScalingConstants c;
      c.er = entry.at("er").get<double>();
      c.chi = entry.at("chi").get<double>();
      c.gamma = entry.at("gamma").get<double>();
      c.delta = entry.at("delta").get<double>();
      c.mse = entry.at("mse").get<double>();
      c.coherent_chi = entry.value("coherent_chi", 1.0);
      c.coherent_mse = entry.value("coherent_mse", 1.0);
      table[entry.at("p").get<double>()] = c;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("constants file '" + path + "': " + e.what());
  }
  if (table.empty()) throw ValidationError("constants file '" + path + "' has no entries");

  constexpr double kTol = 1e-9;
  auto hi = table.lower_bound(p - kTol);
  if (hi != table.end() && std::fabs(hi->first - p) <= kTol) return hi->second;
  if (hi == table.begin() || hi == table.end()) {
    throw ValidationError("p = " + std::to_string(p) + " outside the calibrated range of '" +
                          path + "'");
  }
  auto lo = std::prev(hi);
  const double t = (p - lo->first) / (hi->first - lo->first);
  auto mix = [t](double a, double b) { return std::exp((1.0 - t) * std::log(a) + t * std::log(b)); };
  const ScalingConstants& a = lo->second;
  const ScalingConstants& b = hi->second;
  return {mix(a.er, b.er),     mix(a.chi, b.chi),
          mix(a.gamma, b.gamma), mix(a.delta, b.delta),
          mix(a.mse, b.mse),   mix(a.coherent_chi, b.coherent_chi),
          mix(a.coherent_mse, b.coherent_mse)};
}

}  // namespace squeezetrack
