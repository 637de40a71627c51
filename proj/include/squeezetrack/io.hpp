// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "squeezetrack/error.hpp"
#include "squeezetrack/optimizer.hpp"
#include "squeezetrack/scaling.hpp"
#include "squeezetrack/simulator.hpp"
#include "squeezetrack/spectrum.hpp"

namespace squeezetrack {

using Json = nlohmann::ordered_json;

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

/// Writes through a temporary file and renames, so readers never see a
/// partial file.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string phase_csv(const PhaseTrajectory& traj);
std::string periodogram_csv(const Periodogram& pg);
std::string trace_csv(const std::vector<TracePoint>& trace);
std::string ensemble_csv(const EnsembleResult& result);
std::string search_trace_csv(const std::vector<SearchTraceRow>& rows);
std::vector<SearchTraceRow> parse_search_trace_csv(const std::string& text);

/// Sweep table with the optimum, its MSE and every quantity divided by its
/// scaling law (N/kappa)^exponent.
std::string sweep_csv(const SweepResult& sweep, double p, SweepMode mode);

Json to_json(const PowerLawFit& fit);
Json to_json(const ScalingPrediction& prediction);
Json to_json(const ConditionReport& report);
Json to_json(const SearchPoint& point);
Json to_json(const SweepResult& sweep, double p, SweepMode mode);

}  // namespace squeezetrack
