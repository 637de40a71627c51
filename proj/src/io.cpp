// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace squeezetrack {

namespace {

Json number(double v) {
  // JSON has no literal for non-finite values.
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_field(const std::string& text, std::size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw IoError(fmt::format("trace line {}: '{}' is not a number", line_no, text));
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move output into place at '" + path + "': " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string phase_csv(const PhaseTrajectory& traj) {
  std::string out = "t,phi\n";
  out.reserve(out.size() + traj.values.size() * 48);
  for (std::size_t i = 0; i < traj.values.size(); ++i) {
    out += format_double(static_cast<double>(i) * traj.dt);
    out += ',';
    out += format_double(traj.values[i]);
    out += '\n';
  }
  return out;
}

std::string periodogram_csv(const Periodogram& pg) {
  std::string out = "omega,power,expected\n";
  for (std::size_t i = 0; i < pg.omega.size(); ++i) {
    out += fmt::format("{},{},{}\n", format_double(pg.omega[i]), format_double(pg.power[i]),
                       format_double(pg.expected[i]));
  }
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "t,phi,phi_est,theta\n";
  for (const auto& tp : trace) {
    out += fmt::format("{},{},{},{}\n", format_double(tp.t), format_double(tp.phi),
                       format_double(tp.phi_est), format_double(tp.theta));
  }
  return out;
}

std::string ensemble_csv(const EnsembleResult& result) {
  std::string out = "run,seed,mse,holevo_mse,samples\n";
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const RunResult& run = result.runs[i];
    out += fmt::format("{},{},{},{},{}\n", i, run.seed, format_double(standard_mse(run.stats)),
                       format_double(holevo_mse(run.stats)), run.stats.count);
  }
  return out;
}

std::string search_trace_csv(const std::vector<SearchTraceRow>& rows) {
  std::string out = "cycle,chi,r,gamma,delta,mse,stderr,accepted\n";
  for (const auto& row : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", row.cycle, format_double(row.point.chi),
                       format_double(row.point.r), format_double(row.point.gamma),
                       format_double(row.point.delta), format_double(row.mse),
                       format_double(row.stderr), row.accepted ? 1 : 0);
  }
  return out;
}

std::vector<SearchTraceRow> parse_search_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "cycle,chi,r,gamma,delta,mse,stderr,accepted") {
    throw IoError("search trace does not start with the expected header");
  }
  std::vector<SearchTraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw IoError(fmt::format("trace line {}: expected 8 fields, got {}", line_no, f.size()));
    }
    SearchTraceRow row;
    row.cycle = static_cast<int>(parse_field(f[0], line_no));
    row.point.chi = parse_field(f[1], line_no);
    row.point.r = parse_field(f[2], line_no);
    row.point.gamma = parse_field(f[3], line_no);
    row.point.delta = parse_field(f[4], line_no);
    row.mse = parse_field(f[5], line_no);
    row.stderr = parse_field(f[6], line_no);
    if (f[7] != "0" && f[7] != "1") {
      throw IoError(fmt::format("trace line {}: accepted must be 0 or 1", line_no));
    }
    row.accepted = f[7] == "1";
    rows.push_back(row);
  }
  return rows;
}

namespace {

struct SweepColumn {
  const char* name;
  double exponent;
};

std::vector<SweepColumn> sweep_columns(double p, SweepMode mode) {
  const ScalingExponents e = scaling_exponents(p);
  if (mode == SweepMode::kCoherent) return {{"chi", e.coherent_chi}, {"mse", e.coherent_mse}};
  return {{"er", e.er}, {"chi", e.chi}, {"gamma", e.gamma}, {"delta", e.delta}, {"mse", e.mse}};
}

double column_value(const SweepRow& row, const std::string& name) {
  const SearchPoint& b = row.search.best;
  if (name == "er") return std::exp(b.r);
  if (name == "chi") return b.chi;
  if (name == "gamma") return b.gamma;
  if (name == "delta") return b.delta;
  return row.final.mse;
}

}  // namespace

std::string sweep_csv(const SweepResult& sweep, double p, SweepMode mode) {
  const auto cols = sweep_columns(p, mode);
  std::string out = "flux_over_kappa,ok,chi,r,gamma,delta,mse,stderr";
  for (const auto& c : cols) out += fmt::format(",{}_ratio", c.name);
  out += '\n';
  for (const auto& row : sweep.rows) {
    out += format_double(row.flux_over_kappa);
    if (!row.ok) {
      out += ",0,,,,,,";
      for (std::size_t i = 0; i < cols.size(); ++i) out += ',';
      out += '\n';
      continue;
    }
    const SearchPoint& b = row.search.best;
    out += fmt::format(",1,{},{},{},{},{},{}", format_double(b.chi), format_double(b.r),
                       format_double(b.gamma), format_double(b.delta),
                       format_double(row.final.mse), format_double(row.final.stderr));
    for (const auto& c : cols) {
      out += ',';
      out += format_double(column_value(row, c.name) / std::pow(row.flux_over_kappa, c.exponent));
    }
    out += '\n';
  }
  for (const auto& [name, fit] : sweep.fits) {
    out += fmt::format("# fit {}: exponent={} prefactor={} stderr={} points={}\n", name,
                       format_double(fit.exponent), format_double(fit.prefactor),
                       format_double(fit.stderr_exponent), fit.points);
  }
  return out;
}

Json to_json(const PowerLawFit& fit) {
  Json j;
  j["exponent"] = number(fit.exponent);
  j["prefactor"] = number(fit.prefactor);
  j["stderr_exponent"] = number(fit.stderr_exponent);
  j["points"] = fit.points;
  return j;
}

Json to_json(const ScalingPrediction& s) {
  Json j;
  j["p"] = number(s.p);
  j["flux_over_kappa"] = number(s.flux_over_kappa);
  j["er"] = number(s.er);
  j["r"] = number(s.r());
  j["chi_over_kappa"] = number(s.chi_over_kappa);
  j["gamma_over_kappa"] = number(s.gamma_over_kappa);
  j["delta"] = number(s.delta);
  j["mse"] = number(s.mse);
  j["sql_mse"] = number(s.sql_mse);
  j["squeezed_tracking_mse"] = number(s.squeezed_tracking_mse);
  Json c;
  c["er"] = number(s.constants.er);
  c["chi"] = number(s.constants.chi);
  c["gamma"] = number(s.constants.gamma);
  c["delta"] = number(s.constants.delta);
  c["mse"] = number(s.constants.mse);
  c["coherent_chi"] = number(s.constants.coherent_chi);
  c["coherent_mse"] = number(s.constants.coherent_mse);
  j["constants"] = c;
  return j;
}

Json to_json(const ConditionReport& report) {
  Json arr = Json::array();
  for (const auto& c : report.conditions) {
    Json j;
    j["name"] = c.name;
    j["relation"] = c.relation;
    j["ratio"] = number(c.ratio);
    j["satisfied"] = c.satisfied;
    j["note"] = c.note;
    arr.push_back(j);
  }
  Json out;
  out["conditions"] = arr;
  out["all_satisfied"] = report.all_satisfied();
  return out;
}

Json to_json(const SearchPoint& point) {
  Json j;
  j["chi_over_kappa"] = number(point.chi);
  j["r"] = number(point.r);
  j["er"] = number(std::exp(point.r));
  j["gamma_over_kappa"] = number(point.gamma);
  j["delta"] = number(point.delta);
  return j;
}

Json to_json(const SweepResult& sweep, double p, SweepMode mode) {
  const auto cols = sweep_columns(p, mode);
  Json rows = Json::array();
  for (const auto& row : sweep.rows) {
    Json j;
    j["flux_over_kappa"] = number(row.flux_over_kappa);
    j["ok"] = row.ok;
    if (!row.ok) {
      j["error"] = row.error;
    } else {
      j["best"] = to_json(row.search.best);
      j["mse"] = number(row.final.mse);
      j["stderr"] = number(row.final.stderr);
      j["search_mse"] = number(row.search.best_eval.mse);
      j["cycles"] = row.search.cycles;
      j["converged"] = row.search.converged;
      j["status"] = row.search.status;
      Json ratios;
      for (const auto& c : cols) {
        ratios[c.name] =
            number(column_value(row, c.name) / std::pow(row.flux_over_kappa, c.exponent));
      }
      j["ratios"] = ratios;
    }
    rows.push_back(j);
  }
  Json fits;
  for (const auto& [name, fit] : sweep.fits) fits[name] = to_json(fit);
  Json out;
  out["p"] = number(p);
  out["mode"] = mode == SweepMode::kCoherent ? "coherent" : "squeezed";
  out["rows"] = rows;
  out["fits"] = fits;
  return out;
}

}  // namespace squeezetrack
