// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "squeezetrack/cli.hpp"
#include "squeezetrack/error.hpp"
#include "squeezetrack/optimizer.hpp"
#include "squeezetrack/parallel.hpp"
#include "squeezetrack/scaling.hpp"
#include "squeezetrack/simulator.hpp"
#include "squeezetrack/spectrum.hpp"

namespace squeezetrack::cli {

namespace {

using Clock = std::chrono::steady_clock;

// Collects flag values under their configuration keys so that flags and
// files go through one parsing path.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {
    value("--config", "", "INI or JSON configuration file (flags override it)");
  }

  void value(const std::string& flag, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, raw_[flag], help);
    values_.push_back({opt, flag, key});
  }

  // A flag without argument that sets `key` to `setting`.
  void flag(const std::string& flag, const std::string& key, const std::string& setting,
            const std::string& help) {
    CLI::Option* opt = app_->add_flag(flag, help);
    flags_.push_back({opt, key, setting});
  }

  void verbosity() {
    verbose_ = app_->add_flag("-v,--verbose", "progress messages on stderr (repeat for more)");
  }

  ConfigValues resolve() const {
    ConfigValues cfg;
    const std::string config_path = raw_.at("--config");
    if (!config_path.empty()) cfg = ConfigValues::load(config_path);
    ConfigValues overrides;
    for (const auto& v : values_) {
      if (!v.key.empty() && v.option->count() > 0) overrides.set(v.key, raw_.at(v.flag));
    }
    for (const auto& f : flags_) {
      if (f.option->count() > 0) overrides.set(f.key, f.setting);
    }
    if (verbose_ != nullptr && verbose_->count() > 0) {
      overrides.set("run.verbosity", std::to_string(verbose_->count()));
    }
    cfg.merge_over(overrides);
    return cfg;
  }

 private:
  struct Value {
    CLI::Option* option;
    std::string flag;
    std::string key;
  };
  struct Flag {
    CLI::Option* option;
    std::string key;
    std::string setting;
  };
  CLI::App* app_;
  std::map<std::string, std::string> raw_;
  std::vector<Value> values_;
  std::vector<Flag> flags_;
  CLI::Option* verbose_ = nullptr;
};

void add_run_options(Binder& b) {
  b.value("--seed", "run.seed", "base seed");
  b.value("--workers", "run.workers", "worker threads (default: SQUEEZETRACK_WORKERS, then all cores)");
  b.value("--backend", "run.backend", "closed-loop backend: auto, reference, scalar, avx2, avx512");
  b.flag("--no-timing", "run.timing", "false", "write wall_time_s as 0 for byte-identical summaries");
  b.verbosity();
}

void add_spectrum_options(Binder& b) {
  b.value("--p", "spectrum.p", "spectral exponent p > 1 (required)");
  b.value("--kappa", "spectrum.kappa", "spectral scale kappa (default 1)");
  b.value("--gamma-relax", "spectrum.gamma_relax", "low-frequency cutoff Gamma (default 1e-3)");
}

void add_window_options(Binder& b) {
  b.value("--warmup", "simulation.warmup_multiple", "warm-up length in units of 1/chi (default 100)");
  b.value("--total", "simulation.total_multiple", "run length in units of 1/chi (default 300)");
  b.value("--filter-update", "simulation.filter_update", "linearized (default) or exponential");
}

void add_point_options(Binder& b) {
  b.value("--flux", "simulation.flux", "photon flux N/kappa");
  b.value("--gamma", "simulation.gamma", "cavity damping gamma/kappa (default: predicted)");
  b.value("--chi", "simulation.chi", "filter rate chi/kappa (default: predicted)");
  b.value("--r", "simulation.r", "squeezing parameter r (default: predicted)");
  b.value("--delta", "simulation.delta", "feedback blend delta (default: predicted)");
  b.value("--constants-file", "scaling.constants_file", "calibrated scaling constants (JSON)");
}

struct RunSettings {
  std::uint64_t seed = 1;
  EnsembleOptions ensemble;
  int verbosity = 0;
  bool timing = true;
};

RunSettings run_settings(const ConfigValues& cfg) {
  RunSettings s;
  s.seed = get_seed(cfg, "run.seed", 1);
  s.ensemble.workers = resolve_workers(get_count(cfg, "run.workers", 0));
  s.ensemble.backend = kernels::parse_backend(get_string(cfg, "run.backend", "auto"));
  if (!kernels::backend_supported(s.ensemble.backend)) {
    throw ValidationError(fmt::format("backend '{}' is not supported on this CPU",
                                      kernels::backend_name(s.ensemble.backend)));
  }
  s.verbosity = static_cast<int>(get_count(cfg, "run.verbosity", 0));
  s.timing = get_bool(cfg, "run.timing", true);
  return s;
}

SpectrumParams spectrum_from(const ConfigValues& cfg) {
  SpectrumParams s;
  s.p = get_double(cfg, "spectrum.p", std::nullopt);
  s.kappa = get_double(cfg, "spectrum.kappa", 1.0);
  s.gamma_relax = get_double(cfg, "spectrum.gamma_relax", 1e-3);
  validate(s);
  return s;
}

Json spectrum_echo(const SpectrumParams& s) {
  Json j;
  j["p"] = s.p;
  j["kappa"] = s.kappa;
  j["gamma_relax"] = s.gamma_relax;
  return j;
}

ScalingConstants constants_from(const ConfigValues& cfg, double p) {
  const auto path = cfg.get("scaling.constants_file");
  return path ? load_constants(*path, p) : ScalingConstants{};
}

FilterUpdate filter_update_from(const ConfigValues& cfg) {
  const std::string mode = get_string(cfg, "simulation.filter_update", "linearized");
  if (mode == "linearized") return FilterUpdate::kLinearized;
  if (mode == "exponential") return FilterUpdate::kExponential;
  throw UsageError("filter_update must be 'linearized' or 'exponential', got '" + mode + "'");
}

// SimConfig with windows and seed; the point and flux are set by callers.
SimConfig ensemble_base(const ConfigValues& cfg, const SpectrumParams& spectrum,
                        std::uint64_t seed) {
  SimConfig c;
  c.spectrum = spectrum;
  c.warmup_multiple = get_double(cfg, "simulation.warmup_multiple", 100.0);
  c.total_multiple = get_double(cfg, "simulation.total_multiple", 300.0);
  c.runs = get_count(cfg, "simulation.runs", 64);
  c.base_seed = seed;
  c.filter_update = filter_update_from(cfg);
  return c;
}

Json simulation_echo(const SimConfig& c) {
  Json j;
  j["flux"] = c.flux_over_kappa;
  j["gamma"] = c.gamma_over_kappa;
  j["chi"] = c.chi_over_kappa;
  j["r"] = c.r;
  j["delta"] = c.delta;
  j["warmup_multiple"] = c.warmup_multiple;
  j["total_multiple"] = c.total_multiple;
  j["runs"] = c.runs;
  j["filter_update"] = c.filter_update == FilterUpdate::kExponential ? "exponential" : "linearized";
  return j;
}

std::filesystem::path out_dir(const ConfigValues& cfg) {
  return std::filesystem::path(get_string(cfg, "output.dir", "."));
}

double elapsed(const Clock::time_point& start, bool timing) {
  if (!timing) return 0.0;
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- generate

int cmd_generate(const ConfigValues& cfg) {
  const auto start = Clock::now();
  const RunSettings run = run_settings(cfg);
  const SpectrumParams spectrum = spectrum_from(cfg);
  const double dt = get_double(cfg, "generate.dt", 1e-3);
  const std::size_t samples = get_count(cfg, "generate.samples", 65536);
  const std::string out = get_string(cfg, "output.out", "phase.csv");
  const auto periodogram_path = cfg.get("generate.periodogram");
  const std::size_t pg_seeds = get_count(cfg, "generate.periodogram_seeds", 64);
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (samples < 2) throw ValidationError("samples must be at least 2");
  if (periodogram_path && pg_seeds == 0) throw ValidationError("periodogram_seeds must be >= 1");

  const PhaseTrajectory traj = generate_phase(spectrum, samples, dt, run.seed);
  write_file(out, phase_csv(traj));
  std::size_t pg_length = 0;
  if (periodogram_path) {
    pg_length = std::bit_floor(samples);
    const Periodogram pg = averaged_periodogram(spectrum, pg_length, dt, pg_seeds, run.seed);
    write_file(*periodogram_path, periodogram_csv(pg));
  }

  Json config;
  config["spectrum"] = spectrum_echo(spectrum);
  config["generate"]["dt"] = dt;
  config["generate"]["samples"] = samples;
  if (periodogram_path) config["generate"]["periodogram_seeds"] = pg_seeds;
  config["run"]["seed"] = run.seed;
  Json summary;
  summary["command"] = "generate";
  summary["config"] = config;
  summary["samples"] = samples;
  summary["synthesis_length"] = synthesis_length(samples);
  if (periodogram_path) summary["periodogram_length"] = pg_length;
  summary["wall_time_s"] = elapsed(start, run.timing);
  std::cout << dump(summary);
  return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const ConfigValues& cfg) {
  const auto start = Clock::now();
  const RunSettings run = run_settings(cfg);
  const SpectrumParams spectrum = spectrum_from(cfg);
  SimConfig config = ensemble_base(cfg, spectrum, run.seed);
  config.flux_over_kappa = get_double(cfg, "simulation.flux", std::nullopt);
  const ScalingPrediction pred =
      predict_parameters(spectrum.p, config.flux_over_kappa, constants_from(cfg, spectrum.p));
  config.gamma_over_kappa = get_double(cfg, "simulation.gamma", pred.gamma_over_kappa);
  config.chi_over_kappa = get_double(cfg, "simulation.chi", pred.chi_over_kappa);
  config.r = get_double(cfg, "simulation.r", pred.r());
  config.delta = get_double(cfg, "simulation.delta", pred.delta);
  const bool trace = get_bool(cfg, "simulation.trace", false);
  const auto dir = out_dir(cfg);
  validate(config);  // Condition 4 is rejected here, before any run starts

  EnsembleOptions options = run.ensemble;
  options.trace = trace;
  if (run.verbosity > 0) {
    std::cerr << fmt::format("simulate: {} runs x {} steps, backend {}, {} workers\n", config.runs,
                             config.steps(), kernels::backend_name(options.backend),
                             options.workers);
  }
  const EnsembleResult result = run_ensemble(config, options);

  write_file((dir / "ensemble.csv").string(), ensemble_csv(result));
  if (trace) {
    std::vector<TracePoint> all;
    if (result.runs.size() == 1) {
      all = result.runs.front().trace;
      write_file((dir / "trace.csv").string(), trace_csv(all));
    } else {
      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        write_file((dir / fmt::format("trace_{}.csv", i)).string(),
                   trace_csv(result.runs[i].trace));
      }
    }
  }

  Json echo;
  echo["spectrum"] = spectrum_echo(spectrum);
  echo["simulation"] = simulation_echo(config);
  echo["simulation"]["trace"] = trace;
  echo["run"]["seed"] = run.seed;
  Json summary;
  summary["command"] = "simulate";
  summary["config"] = echo;
  summary["mse"] = result.mse;
  summary["holevo_mse"] = result.holevo_mse;
  summary["standard_mse"] = result.standard_mse;
  summary["mse_form"] = result.holevo_selected ? "holevo" : "standard";
  summary["stderr_mse"] = std::isfinite(result.stderr_mse) ? Json(result.stderr_mse) : Json();
  summary["effective_samples"] = result.effective_samples;
  summary["predicted_mse"] = pred.mse;
  summary["wall_time_s"] = elapsed(start, run.timing);
  write_file((dir / "summary.json").string(), dump(summary));
  std::cout << dump(summary);
  return 0;
}

// ---------------------------------------------------------------- optimize

SweepMode mode_from(const ConfigValues& cfg) {
  const std::string mode = get_string(cfg, "search.mode", "squeezed");
  if (mode == "squeezed") return SweepMode::kSqueezed;
  if (mode == "coherent") return SweepMode::kCoherent;
  throw UsageError("mode must be 'squeezed' or 'coherent', got '" + mode + "'");
}

SearchSpec search_template(const ConfigValues& cfg, const SpectrumParams& spectrum,
                           std::uint64_t seed) {
  SearchSpec spec;
  spec.ensemble = ensemble_base(cfg, spectrum, seed);
  spec.control.step_factor = get_double(cfg, "search.step_factor", 1.25);
  spec.control.min_step_factor = get_double(cfg, "search.min_step_factor", 1.05);
  spec.control.max_cycles = static_cast<int>(get_count(cfg, "search.max_cycles", 20));
  spec.search_runs = get_count(cfg, "search.search_runs", 8);
  spec.confirm_runs = get_count(cfg, "search.confirm_runs", 64);
  spec.common_random_numbers = get_bool(cfg, "search.common_random_numbers", true);
  return spec;
}

Json search_echo(const SearchSpec& spec, SweepMode mode) {
  Json j;
  j["mode"] = mode == SweepMode::kCoherent ? "coherent" : "squeezed";
  j["step_factor"] = spec.control.step_factor;
  j["min_step_factor"] = spec.control.min_step_factor;
  j["max_cycles"] = spec.control.max_cycles;
  j["search_runs"] = spec.search_runs;
  j["confirm_runs"] = spec.confirm_runs;
  j["common_random_numbers"] = spec.common_random_numbers;
  return j;
}

Json windows_echo(const SimConfig& c) {
  Json j;
  j["warmup_multiple"] = c.warmup_multiple;
  j["total_multiple"] = c.total_multiple;
  j["filter_update"] = c.filter_update == FilterUpdate::kExponential ? "exponential" : "linearized";
  return j;
}

Json evaluation_json(const Evaluation& e) {
  Json j;
  j["mse"] = e.mse;
  j["stderr"] = e.stderr;
  return j;
}

void write_calibration(const std::string& path, double p, double flux, const ScalingConstants& c,
                       SweepMode mode) {
  Json doc;
  if (std::filesystem::exists(path)) {
    try {
      doc = Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("calibration file '" + path + "' is not valid JSON: " + e.what());
    }
  }
  if (!doc.contains("entries")) doc["entries"] = Json::array();
  Json* entry = nullptr;
  for (auto& e : doc["entries"]) {
    if (std::fabs(e.at("p").get<double>() - p) <= 1e-9) entry = &e;
  }
  if (entry == nullptr) {
    Json e;
    e["p"] = p;
    doc["entries"].push_back(e);
    entry = &doc["entries"].back();
  }
  if (mode == SweepMode::kCoherent) {
    (*entry)["coherent_chi"] = c.coherent_chi;
    (*entry)["coherent_mse"] = c.coherent_mse;
    (*entry)["coherent_flux"] = flux;
  } else {
    (*entry)["er"] = c.er;
    (*entry)["chi"] = c.chi;
    (*entry)["gamma"] = c.gamma;
    (*entry)["delta"] = c.delta;
    (*entry)["mse"] = c.mse;
    (*entry)["flux"] = flux;
  }
  auto& entries = doc["entries"];
  std::sort(entries.begin(), entries.end(), [](const Json& a, const Json& b) {
    return a.at("p").get<double>() < b.at("p").get<double>();
  });
  write_file(path, dump(doc));
}

int optimize_single(const ConfigValues& cfg, const RunSettings& run,
                    const SpectrumParams& spectrum, const SearchSpec& tmpl, SweepMode mode,
                    const Clock::time_point& start) {
  const double flux = get_double(cfg, "simulation.flux", std::nullopt);
  SearchSpec spec = prepare_point(spectrum.p, flux, tmpl, constants_from(cfg, spectrum.p), mode);
  SearchPoint& init = spec.control.initial;
  init.chi = get_double(cfg, "simulation.chi", init.chi);
  init.gamma = get_double(cfg, "simulation.gamma", init.gamma);
  if (mode == SweepMode::kSqueezed) {
    init.r = get_double(cfg, "simulation.r", init.r);
    init.delta = get_double(cfg, "simulation.delta", init.delta);
  }
  validate(spec);
  if (!feasible_point(spec.ensemble, init)) {
    validate(with_point(spec.ensemble, init));  // raises the specific reason
    throw ValidationError("initial search point is infeasible");
  }
  const auto dir = out_dir(cfg);
  const std::string trace_path = (dir / "search_trace.csv").string();

  SearchHooks hooks;
  if (const auto resume = cfg.get("search.resume")) {
    hooks.resume = parse_search_trace_csv(read_file(*resume));
  }
  hooks.on_cycle = [&](const std::vector<SearchTraceRow>& rows) {
    write_file(trace_path, search_trace_csv(rows));
    if (run.verbosity > 0 && !rows.empty()) {
      double best = rows.front().mse;
      for (const auto& r : rows) {
        if (r.accepted) best = r.mse;
      }
      std::cerr << fmt::format("optimize: cycle {} done, best mse {:.6g}\n", rows.back().cycle,
                               best);
    }
  };
  const SearchResult res = coordinate_search(spec, run.ensemble, hooks);
  write_file(trace_path, search_trace_csv(res.trace));

  const Evaluation final = res.confirmed.value_or(res.best_eval);
  const ScalingConstants implied =
      constants_from_optimum(spectrum.p, flux, res.best, final.mse, mode);
  if (const auto cal = cfg.get("search.calibrate_out")) {
    write_calibration(*cal, spectrum.p, flux, implied, mode);
  }

  Json echo;
  echo["spectrum"] = spectrum_echo(spectrum);
  echo["simulation"] = windows_echo(spec.ensemble);
  echo["simulation"]["flux"] = flux;
  echo["simulation"]["chi"] = init.chi;
  echo["simulation"]["gamma"] = init.gamma;
  echo["simulation"]["r"] = init.r;
  echo["simulation"]["delta"] = init.delta;
  echo["search"] = search_echo(spec, mode);
  echo["run"]["seed"] = run.seed;

  Json summary;
  summary["command"] = "optimize";
  summary["config"] = echo;
  summary["best"] = to_json(res.best);
  summary["search"] = evaluation_json(res.best_eval);
  summary["confirmed"] = res.confirmed ? evaluation_json(*res.confirmed) : Json();
  summary["mse"] = final.mse;
  summary["stderr_mse"] = final.stderr;
  summary["cycles"] = res.cycles;
  summary["converged"] = res.converged;
  summary["final_step_factor"] = res.final_step_factor;
  summary["status"] = res.status;
  Json implied_json;
  if (mode == SweepMode::kCoherent) {
    implied_json["coherent_chi"] = implied.coherent_chi;
    implied_json["coherent_mse"] = implied.coherent_mse;
  } else {
    implied_json["er"] = implied.er;
    implied_json["chi"] = implied.chi;
    implied_json["gamma"] = implied.gamma;
    implied_json["delta"] = implied.delta;
    implied_json["mse"] = implied.mse;
  }
  summary["implied_constants"] = implied_json;
  summary["wall_time_s"] = elapsed(start, run.timing);
  write_file((dir / "best.json").string(), dump(summary));
  std::cout << dump(summary);
  return 0;
}

int optimize_sweep(const ConfigValues& cfg, const RunSettings& run, const SpectrumParams& spectrum,
                   const SearchSpec& tmpl, SweepMode mode, const Clock::time_point& start) {
  const std::vector<double> grid = get_double_list(cfg, "search.flux_grid");
  if (cfg.get("search.resume")) throw UsageError("--resume applies to single-point searches only");
  const ScalingConstants constants = constants_from(cfg, spectrum.p);
  validate(tmpl.control);
  const auto dir = out_dir(cfg);

  Json echo;
  echo["spectrum"] = spectrum_echo(spectrum);
  echo["simulation"] = windows_echo(tmpl.ensemble);
  echo["search"] = search_echo(tmpl, mode);
  echo["search"]["flux_grid"] = grid;
  echo["run"]["seed"] = run.seed;

  auto emit = [&](const SweepResult& sweep, bool final) {
    write_file((dir / "sweep.csv").string(), sweep_csv(sweep, spectrum.p, mode));
    Json doc;
    doc["command"] = "optimize";
    doc["config"] = echo;
    doc["complete"] = final;
    const Json body = to_json(sweep, spectrum.p, mode);
    for (const auto& [k, v] : body.items()) doc[k] = v;
    doc["wall_time_s"] = elapsed(start, run.timing);
    write_file((dir / "sweep.json").string(), dump(doc));
    return doc;
  };
  const SweepResult sweep = sweep_flux(
      spectrum.p, grid, tmpl, constants, mode, run.ensemble, [&](const SweepResult& partial) {
        if (run.verbosity > 0) {
          const SweepRow& row = partial.rows.back();
          std::cerr << fmt::format("optimize: flux {:g} {}\n", row.flux_over_kappa,
                                   row.ok ? fmt::format("mse {:.6g}", row.final.mse)
                                          : "failed: " + row.error);
        }
        emit(partial, false);
      });
  std::cout << dump(emit(sweep, true));
  for (const auto& row : sweep.rows) {
    if (!row.ok) return 4;
  }
  return 0;
}

int cmd_optimize(const ConfigValues& cfg) {
  const auto start = Clock::now();
  const RunSettings run = run_settings(cfg);
  const SpectrumParams spectrum = spectrum_from(cfg);
  const SweepMode mode = mode_from(cfg);
  const SearchSpec tmpl = search_template(cfg, spectrum, run.seed);
  const bool sweep = cfg.get("search.flux_grid").has_value();
  if (sweep == cfg.get("simulation.flux").has_value()) {
    throw UsageError("give exactly one of --flux (single point) or --flux-grid (sweep)");
  }
  return sweep ? optimize_sweep(cfg, run, spectrum, tmpl, mode, start)
               : optimize_single(cfg, run, spectrum, tmpl, mode, start);
}

// ---------------------------------------------------------------- scaling

Json exponents_json(const ScalingExponents& e) {
  Json j;
  j["er"] = e.er;
  j["chi"] = e.chi;
  j["gamma"] = e.gamma;
  j["delta"] = e.delta;
  j["mse"] = e.mse;
  j["coherent_chi"] = e.coherent_chi;
  j["coherent_mse"] = e.coherent_mse;
  return j;
}

inline constexpr double kTableExponents[] = {1.25, 1.5, 2.0, 2.5, 3.0, 4.0};

int cmd_scaling(const ConfigValues& cfg, bool as_json, const std::string& json_out) {
  const double p = get_double(cfg, "spectrum.p", std::nullopt);
  if (!(p > 1.0)) throw ValidationError("exponent p must be > 1");
  const ScalingExponents e = scaling_exponents(p);
  const ScalingConstants constants = constants_from(cfg, p);
  const auto flux = cfg.get("simulation.flux");

  Json doc;
  doc["command"] = "scaling";
  Json echo;
  echo["spectrum"]["p"] = p;
  if (flux) echo["simulation"]["flux"] = get_double(cfg, "simulation.flux", std::nullopt);
  if (const auto path = cfg.get("scaling.constants_file")) echo["scaling"]["constants_file"] = *path;
  doc["config"] = echo;
  doc["exponents"] = exponents_json(e);
  doc["c_z"] = heisenberg_constant(p);
  doc["c_a"] = pulsed_constant(p);
  std::optional<ScalingPrediction> pred;
  std::optional<ConditionReport> report;
  if (flux) {
    pred = predict_parameters(p, get_double(cfg, "simulation.flux", std::nullopt), constants);
    report = check_conditions(*pred);
    doc["prediction"] = to_json(*pred);
    doc["coherent_prediction"] = to_json(predict_coherent(p, pred->flux_over_kappa, constants));
    doc["conditions"] = to_json(*report);
  } else {
    doc["constants"] = to_json(predict_parameters(p, 1.0, constants))["constants"];
  }
  Json table = Json::array();
  for (double q : kTableExponents) {
    Json row;
    row["p"] = q;
    row["c_z"] = heisenberg_constant(q);
    row["c_a"] = pulsed_constant(q);
    table.push_back(row);
  }
  doc["constants_table"] = table;

  if (!json_out.empty()) write_file(json_out, dump(doc));
  if (as_json) {
    std::cout << dump(doc);
    return 0;
  }

  std::cout << fmt::format("p = {}\n", format_double(p));
  std::cout << "exponents of N/kappa:\n";
  std::cout << fmt::format("  e^r    {}\n  chi    {}\n  gamma  {}\n  delta  {}\n  mse    {}\n",
                           format_double(e.er), format_double(e.chi), format_double(e.gamma),
                           format_double(e.delta), format_double(e.mse));
  std::cout << fmt::format("  coherent chi {}\n  coherent mse {}\n", format_double(e.coherent_chi),
                           format_double(e.coherent_mse));
  std::cout << fmt::format("c_Z = {}\nc_A = {}\n", format_double(heisenberg_constant(p)),
                           format_double(pulsed_constant(p)));
  if (pred) {
    std::cout << fmt::format("prediction at N/kappa = {}:\n", format_double(pred->flux_over_kappa));
    std::cout << fmt::format(
        "  e^r = {}\n  r = {}\n  chi/kappa = {}\n  gamma/kappa = {}\n  delta = {}\n  mse = {}\n"
        "  sql mse = {}\n",
        format_double(pred->er), format_double(pred->r()), format_double(pred->chi_over_kappa),
        format_double(pred->gamma_over_kappa), format_double(pred->delta), format_double(pred->mse),
        format_double(pred->sql_mse));
    std::cout << "conditions:\n";
    for (const auto& c : report->conditions) {
      std::cout << fmt::format("  {} [{}] ratio {} {} ({})\n", c.name, c.relation,
                               format_double(c.ratio), c.satisfied ? "ok" : "VIOLATED", c.note);
    }
  }
  std::cout << "p,c_Z,c_A\n";
  for (double q : kTableExponents) {
    std::cout << fmt::format("{},{},{}\n", format_double(q), format_double(heisenberg_constant(q)),
                             format_double(pulsed_constant(q)));
  }
  return 0;
}

}  // namespace

int exit_code_for(const std::exception& err) {
  if (dynamic_cast<const UsageError*>(&err) != nullptr) return 2;
  if (dynamic_cast<const ValidationError*>(&err) != nullptr) return 3;
  if (dynamic_cast<const NumericError*>(&err) != nullptr) return 4;
  return 1;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Adaptive phase tracking with squeezed light: simulation and scaling tools",
               "squeezetrack"};
  app.require_subcommand(1);

  CLI::App* generate = app.add_subcommand("generate", "synthesize a phase trajectory");
  Binder gen(generate);
  add_spectrum_options(gen);
  add_run_options(gen);
  gen.value("--dt", "generate.dt", "sample spacing (default 1e-3)");
  gen.value("--samples", "generate.samples", "number of samples (default 65536)");
  gen.value("--out", "output.out", "trajectory CSV path (default phase.csv)");
  gen.value("--periodogram", "generate.periodogram", "also write an averaged periodogram CSV");
  gen.value("--periodogram-seeds", "generate.periodogram_seeds", "trajectories averaged (default 64)");

  CLI::App* simulate = app.add_subcommand("simulate", "run a closed-loop ensemble");
  Binder sim(simulate);
  add_spectrum_options(sim);
  add_point_options(sim);
  add_window_options(sim);
  add_run_options(sim);
  sim.value("--runs", "simulation.runs", "independent runs (default 64)");
  sim.flag("--trace", "simulation.trace", "true", "write t,phi,phi_est,theta traces");
  sim.value("--out-dir", "output.dir", "output directory (default .)");

  CLI::App* optimize = app.add_subcommand("optimize", "search the four loop parameters");
  Binder opt(optimize);
  add_spectrum_options(opt);
  add_point_options(opt);
  add_window_options(opt);
  add_run_options(opt);
  opt.value("--flux-grid", "search.flux_grid", "comma-separated N/kappa values (sweep)");
  opt.value("--mode", "search.mode", "squeezed (default) or coherent");
  opt.value("--step-factor", "search.step_factor", "initial multiplicative step (default 1.25)");
  opt.value("--min-step-factor", "search.min_step_factor", "convergence threshold (default 1.05)");
  opt.value("--max-cycles", "search.max_cycles", "cycle limit (default 20)");
  opt.value("--search-runs", "search.search_runs", "runs per search evaluation (default 8)");
  opt.value("--confirm-runs", "search.confirm_runs", "runs for the confirmation (default 64, 0 skips)");
  opt.flag("--no-crn", "search.common_random_numbers", "false", "fresh seeds for every evaluation");
  opt.value("--resume", "search.resume", "search trace CSV of an interrupted run");
  opt.value("--calibrate-out", "search.calibrate_out", "merge the implied constants into this file");
  opt.value("--out-dir", "output.dir", "output directory (default .)");

  CLI::App* scaling = app.add_subcommand("scaling", "scaling-law predictions and constants");
  Binder scl(scaling);
  scl.value("--p", "spectrum.p", "spectral exponent p > 1 (required)");
  scl.value("--flux", "simulation.flux", "photon flux N/kappa for parameter predictions");
  scl.value("--constants-file", "scaling.constants_file", "calibrated scaling constants (JSON)");
  bool as_json = false;
  std::string json_out;
  scaling->add_flag("--json", as_json, "print JSON instead of text");
  scaling->add_option("--out", json_out, "also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen.resolve());
    if (simulate->parsed()) return cmd_simulate(sim.resolve());
    if (optimize->parsed()) return cmd_optimize(opt.resolve());
    if (scaling->parsed()) return cmd_scaling(scl.resolve(), as_json, json_out);
  } catch (const std::exception& e) {
    std::cerr << "squeezetrack: error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 2;
}

}  // namespace squeezetrack::cli
