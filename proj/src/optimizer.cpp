// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "squeezetrack/cavity.hpp"
#include "squeezetrack/error.hpp"

namespace squeezetrack {

namespace {

double& coord(SearchPoint& p, Coordinate c) {
  switch (c) {
    case Coordinate::kChi: return p.chi;
    case Coordinate::kR: return p.r;
    case Coordinate::kGamma: return p.gamma;
    case Coordinate::kDelta: return p.delta;
  }
  return p.chi;
}

// One multiplicative step; r moves additively since e^r is the scaled quantity.
std::optional<SearchPoint> propose(const SearchPoint& from, Coordinate c, int dir, double step) {
  SearchPoint next = from;
  double& v = coord(next, c);
  if (c == Coordinate::kR) {
    v += dir * std::log(step);
    if (v < 0.0) {
      if (from.r <= 0.0) return std::nullopt;
      v = 0.0;
    }
  } else {
    v = dir > 0 ? v * step : v / step;
    if (c == Coordinate::kDelta) v = std::min(v, 1.0);
  }
  if (next == from) return std::nullopt;
  return next;
}

}  // namespace

bool SearchPoint::operator<(const SearchPoint& o) const {
  return std::tie(chi, r, gamma, delta) < std::tie(o.chi, o.r, o.gamma, o.delta);
}

void validate(const SearchControl& control) {
  if (!(control.min_step_factor > 1.0) || !(control.step_factor > control.min_step_factor)) {
    throw ValidationError("need step_factor > min_step_factor > 1");
  }
  if (control.max_cycles < 1) throw ValidationError("max_cycles must be >= 1");
  std::array<bool, 4> seen{};
  for (Coordinate c : control.order) seen[static_cast<int>(c)] = true;
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw ValidationError("coordinate order must name each parameter once");
  }
  const SearchPoint& p = control.initial;
  if (!(p.chi > 0.0) || !(p.gamma > 0.0) || !(p.r >= 0.0)) {
    throw ValidationError("initial chi and gamma must be > 0 and r >= 0");
  }
  const bool delta_frozen = control.frozen[static_cast<int>(Coordinate::kDelta)];
  if (!(p.delta <= 1.0) || !(delta_frozen ? p.delta >= 0.0 : p.delta > 0.0)) {
    throw ValidationError("initial delta must lie in (0, 1]");
  }
}

SearchResult coordinate_search(const SearchControl& control, const Objective& objective,
                               const Feasibility& feasible, const SearchHooks& hooks) {
  validate(control);
  if (!feasible(control.initial)) {
    throw FeasibilityError("initial search point is infeasible (Condition 4 or domain)");
  }

  SearchResult res;
  std::map<SearchPoint, Evaluation> memo;
  for (const auto& row : hooks.resume) memo[row.point] = {row.mse, row.stderr};

  int cycle = 0;
  auto evaluate = [&](const SearchPoint& p) {
    auto it = memo.find(p);
    if (it != memo.end()) return it->second;
    Evaluation e;
    try {
      e = objective(p);
    } catch (const NumericError&) {
      e = {std::numeric_limits<double>::infinity(), 0.0};
    }
    ++res.evaluations;
    memo[p] = e;
    return e;
  };

  double step = control.step_factor;
  SearchPoint best = control.initial;
  Evaluation best_eval;
  int first_cycle = 1;

  if (!hooks.resume.empty()) {
    // Replay: the best is the last accepted row, and the step shrinks after
    // every completed cycle that accepted nothing.
    res.trace = hooks.resume;
    if (!(res.trace.front().cycle == 0 && res.trace.front().point == control.initial)) {
      throw ValidationError("resume trace does not start at the initial point of this search");
    }
    int last_cycle = 0;
    for (const auto& row : res.trace) {
      if (row.accepted) {
        best = row.point;
        best_eval = {row.mse, row.stderr};
      }
      last_cycle = std::max(last_cycle, row.cycle);
    }
    for (int c = 1; c <= last_cycle; ++c) {
      const bool moved = std::any_of(res.trace.begin(), res.trace.end(), [c](const auto& row) {
        return row.cycle == c && row.accepted;
      });
      if (!moved) step = std::sqrt(step);
    }
    first_cycle = last_cycle + 1;
    res.cycles = last_cycle;
  } else {
    best_eval = evaluate(best);
    res.trace.push_back({0, best, best_eval.mse, best_eval.stderr, true});
    if (hooks.on_cycle) hooks.on_cycle(res.trace);
  }

  bool all_infeasible_seen = false;
  for (cycle = first_cycle; step >= control.min_step_factor && cycle <= control.max_cycles;
       ++cycle) {
    bool moved = false;
    bool any_feasible = false;
    for (Coordinate c : control.order) {
      if (control.frozen[static_cast<int>(c)]) continue;
      for (int dir : {+1, -1}) {
        bool moved_here = false;
        for (;;) {
          const auto cand = propose(best, c, dir, step);
          if (!cand || !feasible(*cand)) break;
          any_feasible = true;
          const Evaluation e = evaluate(*cand);
          const bool accept = e.mse < best_eval.mse - best_eval.stderr;
          res.trace.push_back({cycle, *cand, e.mse, e.stderr, accept});
          if (!accept) break;
          best = *cand;
          best_eval = e;
          moved = moved_here = true;
        }
        if (moved_here) break;
      }
    }
    res.cycles = cycle;
    if (!any_feasible) all_infeasible_seen = true;
    if (!moved) step = std::sqrt(step);
    if (hooks.on_cycle) hooks.on_cycle(res.trace);
  }

  res.best = best;
  res.best_eval = best_eval;
  res.final_step_factor = step;
  res.converged = step < control.min_step_factor;
  if (res.converged) {
    res.status = all_infeasible_seen ? "converged (some neighborhoods fully infeasible)"
                                     : "converged";
  } else {
    res.status = "budget exhausted after " + std::to_string(res.cycles) +
                 " cycles; reporting best so far";
  }
  return res;
}

void validate(const SearchSpec& spec) {
  validate(spec.control);
  if (spec.search_runs == 0) throw ValidationError("search_runs must be >= 1");
  SimConfig probe = with_point(spec.ensemble, spec.control.initial);
  probe.runs = spec.search_runs;
  validate(probe);
}

bool feasible_point(const SimConfig& base, const SearchPoint& point) {
  if (!(point.chi > 0.0) || !(point.gamma > 0.0) || !(point.r >= 0.0)) return false;
  if (!(point.delta >= 0.0 && point.delta <= 1.0)) return false;
  if (!std::isfinite(point.chi) || !std::isfinite(point.gamma) || !std::isfinite(point.r)) {
    return false;
  }
  try {
    amplitude_from_flux(base.flux(), point.gamma * base.spectrum.kappa, point.r);
  } catch (const FeasibilityError&) {
    return false;
  }
  return true;
}

SimConfig with_point(const SimConfig& base, const SearchPoint& point) {
  SimConfig c = base;
  c.chi_over_kappa = point.chi;
  c.r = point.r;
  c.gamma_over_kappa = point.gamma;
  c.delta = point.delta;
  return c;
}

SearchResult coordinate_search(const SearchSpec& spec, const EnsembleOptions& options,
                               const SearchHooks& hooks) {
  validate(spec);
  PhaseCache cache;
  EnsembleOptions opts = options;
  if (opts.phase_cache == nullptr) opts.phase_cache = &cache;
  std::uint64_t calls = 0;

  auto objective = [&](const SearchPoint& p) {
    SimConfig c = with_point(spec.ensemble, p);
    c.runs = spec.search_runs;
    if (!spec.common_random_numbers) c.base_seed = spec.ensemble.base_seed + 0x9E37ULL * ++calls;
    const EnsembleResult r = run_ensemble(c, opts);
    return Evaluation{r.mse, std::isfinite(r.stderr_mse) ? r.stderr_mse : 0.0};
  };
  auto feasible = [&](const SearchPoint& p) { return feasible_point(spec.ensemble, p); };

  SearchResult res = coordinate_search(spec.control, objective, feasible, hooks);
  if (spec.confirm_runs > 0) {
    SimConfig c = with_point(spec.ensemble, res.best);
    c.runs = spec.confirm_runs;
    EnsembleOptions confirm_opts = options;
    const EnsembleResult r = run_ensemble(c, confirm_opts);
    res.confirmed = Evaluation{r.mse, std::isfinite(r.stderr_mse) ? r.stderr_mse : 0.0};
  }
  return res;
}

namespace {

SearchPoint point_from_prediction(const ScalingPrediction& s) {
  return {s.chi_over_kappa, s.r(), s.gamma_over_kappa, s.delta};
}

SearchPoint rescale(const SearchPoint& p, double ratio, const ScalingExponents& e,
                    SweepMode mode) {
  SearchPoint q = p;
  if (mode == SweepMode::kCoherent) {
    q.chi = p.chi * std::pow(ratio, e.coherent_chi);
    q.gamma = p.gamma * std::pow(ratio, e.gamma);
    return q;
  }
  q.chi = p.chi * std::pow(ratio, e.chi);
  q.r = p.r + e.er * std::log(ratio);
  q.gamma = p.gamma * std::pow(ratio, e.gamma);
  q.delta = std::min(1.0, p.delta * std::pow(ratio, e.delta));
  return q;
}

}  // namespace

SearchSpec prepare_point(double p, double flux_over_kappa, const SearchSpec& spec_template,
                         const ScalingConstants& constants, SweepMode mode) {
  SearchSpec spec = spec_template;
  spec.ensemble.spectrum.p = p;
  spec.ensemble.flux_over_kappa = flux_over_kappa;
  if (mode == SweepMode::kCoherent) {
    spec.control.frozen = {false, true, true, true};
    spec.control.initial = point_from_prediction(predict_coherent(p, flux_over_kappa, constants));
    spec.control.initial.r = 0.0;
    spec.control.initial.delta = 0.0;
  } else {
    spec.control.initial = point_from_prediction(predict_parameters(p, flux_over_kappa, constants));
  }
  return spec;
}

SweepResult sweep_flux(double p, const std::vector<double>& flux_grid,
                       const SearchSpec& spec_template, const ScalingConstants& constants,
                       SweepMode mode, const EnsembleOptions& options,
                       const std::function<void(const SweepResult&)>& on_row) {
  const ScalingExponents e = scaling_exponents(p);
  if (flux_grid.empty()) throw ValidationError("flux grid is empty");
  for (std::size_t i = 0; i < flux_grid.size(); ++i) {
    if (!(flux_grid[i] > 0.0)) throw ValidationError("flux grid values must be > 0");
    if (i > 0 && !(flux_grid[i] > flux_grid[i - 1])) {
      throw ValidationError("flux grid must be strictly ascending");
    }
  }

  SweepResult out;
  std::optional<std::pair<double, SearchPoint>> anchor;  // last successful optimum
  for (double flux : flux_grid) {
    SweepRow row;
    row.flux_over_kappa = flux;
    SearchSpec spec = prepare_point(p, flux, spec_template, constants, mode);
    if (anchor) {
      spec.control.initial = rescale(anchor->second, flux / anchor->first, e, mode);
      if (mode == SweepMode::kCoherent) {
        spec.control.initial.r = 0.0;
        spec.control.initial.delta = 0.0;
      }
    }
    try {
      row.search = coordinate_search(spec, options);
      row.final = row.search.confirmed.value_or(row.search.best_eval);
      row.ok = std::isfinite(row.final.mse) && row.final.mse > 0.0;
      if (!row.ok) row.error = "non-finite or zero MSE at optimum";
      else anchor = std::make_pair(flux, row.search.best);
    } catch (const Error& err) {
      row.ok = false;
      row.error = err.what();
    }
    out.rows.push_back(std::move(row));
    if (on_row) on_row(out);
  }

  auto fit_column = [&](const std::string& name, auto getter) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : out.rows) {
      if (!row.ok) continue;
      const double v = getter(row);
      if (v > 0.0 && std::isfinite(v)) pts.emplace_back(row.flux_over_kappa, v);
    }
    if (pts.size() >= 2) out.fits[name] = fit_power_law(pts);
  };
  fit_column("mse", [](const SweepRow& r) { return r.final.mse; });
  fit_column("chi", [](const SweepRow& r) { return r.search.best.chi; });
  if (mode == SweepMode::kSqueezed) {
    fit_column("er", [](const SweepRow& r) { return std::exp(r.search.best.r); });
    fit_column("gamma", [](const SweepRow& r) { return r.search.best.gamma; });
    fit_column("delta", [](const SweepRow& r) { return r.search.best.delta; });
  }
  return out;
}

ScalingConstants constants_from_optimum(double p, double flux_over_kappa, const SearchPoint& best,
                                        double mse, SweepMode mode) {
  const ScalingExponents e = scaling_exponents(p);
  const double n = flux_over_kappa;
  ScalingConstants c;
  if (mode == SweepMode::kCoherent) {
    c.coherent_chi = best.chi / std::pow(n, e.coherent_chi);
    c.coherent_mse = mse / std::pow(n, e.coherent_mse);
    return c;
  }
  c.er = std::exp(best.r) / std::pow(n, e.er);
  c.chi = best.chi / std::pow(n, e.chi);
  c.gamma = best.gamma / std::pow(n, e.gamma);
  c.delta = best.delta / std::pow(n, e.delta);
  c.mse = mse / std::pow(n, e.mse);
  return c;
}

}  // namespace squeezetrack
