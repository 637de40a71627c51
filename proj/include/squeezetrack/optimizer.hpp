// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "squeezetrack/scaling.hpp"
#include "squeezetrack/simulator.hpp"

namespace squeezetrack {

/// The four searched quantities. Rates are in units of kappa.
struct SearchPoint {
  double chi = 1.0;
  double r = 0.0;
  double gamma = 1.0;
  double delta = 1.0;

  bool operator<(const SearchPoint& o) const;
  bool operator==(const SearchPoint& o) const = default;
};

/// Search order within a cycle.
enum class Coordinate { kChi = 0, kR = 1, kGamma = 2, kDelta = 3 };
inline constexpr std::array<Coordinate, 4> kCoordinateOrder = {
    Coordinate::kChi, Coordinate::kR, Coordinate::kGamma, Coordinate::kDelta};

struct Evaluation {
  double mse = 0.0;
  double stderr = 0.0;
};

struct SearchTraceRow {
  int cycle = 0;
  SearchPoint point;
  double mse = 0.0;
  double stderr = 0.0;
  bool accepted = false;
};

/// Step control shared by every objective.
struct SearchControl {
  SearchPoint initial;
  double step_factor = 1.25;
  double min_step_factor = 1.05;
  int max_cycles = 20;
  std::array<bool, 4> frozen{};  // indexed by Coordinate
  std::array<Coordinate, 4> order = kCoordinateOrder;
};

void validate(const SearchControl& control);

struct SearchHooks {
  /// Trace rows of an earlier, interrupted search with the same control.
  /// Completed cycles are replayed from it instead of being re-evaluated.
  std::vector<SearchTraceRow> resume;
  /// Called with the full trace after every completed cycle.
  std::function<void(const std::vector<SearchTraceRow>&)> on_cycle;
};

struct SearchResult {
  SearchPoint best;
  Evaluation best_eval;
  std::optional<Evaluation> confirmed;  // larger ensemble at `best`
  std::vector<SearchTraceRow> trace;
  int cycles = 0;
  bool converged = false;
  double final_step_factor = 0.0;
  std::size_t evaluations = 0;  // objective calls made by this invocation
  std::string status;
};

using Objective = std::function<Evaluation(const SearchPoint&)>;
using Feasibility = std::function<bool(const SearchPoint&)>;

/// Cyclic coordinate search with multiplicative steps. A move is accepted
/// when it lowers the objective by more than the standard error of the
/// current best. Infeasible proposals are skipped without evaluation.
SearchResult coordinate_search(const SearchControl& control, const Objective& objective,
                               const Feasibility& feasible, const SearchHooks& hooks = {});

/// Ensemble-MSE search at fixed spectrum and flux.
struct SearchSpec {
  SearchControl control;
  SimConfig ensemble;  // spectrum, flux, windows and base_seed; runs is ignored
  bool common_random_numbers = true;
  std::size_t search_runs = 8;
  std::size_t confirm_runs = 64;  // 0 skips the confirmation
};

void validate(const SearchSpec& spec);

/// Condition 4 and the parameter domains (r >= 0, 0 < delta <= 1).
bool feasible_point(const SimConfig& base, const SearchPoint& point);

SimConfig with_point(const SimConfig& base, const SearchPoint& point);

SearchResult coordinate_search(const SearchSpec& spec, const EnsembleOptions& options = {},
                               const SearchHooks& hooks = {});

enum class SweepMode { kSqueezed, kCoherent };

struct SweepRow {
  double flux_over_kappa = 0.0;
  bool ok = false;
  std::string error;  // set when the point failed; the row is a gap
  SearchResult search;
  Evaluation final;  // confirmed if available, otherwise the search best
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::map<std::string, PowerLawFit> fits;  // per column, over ok rows
};

/// Optimizes each flux in turn, starting the first point from the scaling
/// prediction and every later point from the previous optimum rescaled by
/// the scaling laws. In coherent mode r = 0 and delta = 0 are fixed and
/// gamma is frozen, so only chi is searched.
SweepResult sweep_flux(double p, const std::vector<double>& flux_grid,
                       const SearchSpec& spec_template, const ScalingConstants& constants,
                       SweepMode mode = SweepMode::kSqueezed, const EnsembleOptions& options = {},
                       const std::function<void(const SweepResult&)>& on_row = {});

/// Search specification for one flux: the template with p and flux set and
/// the starting point taken from the scaling prediction (coherent mode: r,
/// gamma and delta frozen, r = delta = 0).
SearchSpec prepare_point(double p, double flux_over_kappa, const SearchSpec& spec_template,
                         const ScalingConstants& constants, SweepMode mode = SweepMode::kSqueezed);

/// Prefactors implied by an optimum: each optimized quantity divided by its
/// unit-constant scaling law.
ScalingConstants constants_from_optimum(double p, double flux_over_kappa,
                                        const SearchPoint& best, double mse,
                                        SweepMode mode = SweepMode::kSqueezed);

}  // namespace squeezetrack
