// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "squeezetrack/cli.hpp"
#include "squeezetrack/error.hpp"

namespace squeezetrack::cli {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "spectrum.p",
      "spectrum.kappa",
      "spectrum.gamma_relax",
      "simulation.flux",
      "simulation.gamma",
      "simulation.chi",
      "simulation.r",
      "simulation.delta",
      "simulation.warmup_multiple",
      "simulation.total_multiple",
      "simulation.runs",
      "simulation.filter_update",
      "simulation.trace",
      "generate.dt",
      "generate.samples",
      "generate.periodogram",
      "generate.periodogram_seeds",
      "search.mode",
      "search.flux_grid",
      "search.step_factor",
      "search.min_step_factor",
      "search.max_cycles",
      "search.search_runs",
      "search.confirm_runs",
      "search.common_random_numbers",
      "search.resume",
      "search.calibrate_out",
      "scaling.constants_file",
      "output.dir",
      "output.out",
      "run.seed",
      "run.workers",
      "run.backend",
      "run.verbosity",
      "run.timing",
  };
  return keys;
}

namespace {

void check_known(const std::string& key) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw UsageError("unknown configuration key '" + key + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigValues ConfigValues::load(const std::string& path) {
  const std::string text = read_file(path);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!json) return parse_ini(text);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

ConfigValues ConfigValues::parse_ini(const std::string& text) {
  // The INI reader only knows ';' comments; accept '#' as well.
  std::istringstream lines(text);
  std::string line, cleaned;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] == '#') continue;
    cleaned += line;
    cleaned += '\n';
  }
  boost::property_tree::ptree tree;
  std::istringstream in(cleaned);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  ConfigValues cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw UsageError("config key '" + section + "' is outside any section");
    for (const auto& [key, value] : body) {
      cfg.set(section + "." + key, trim(value.get_value<std::string>()));
    }
  }
  return cfg;
}

ConfigValues ConfigValues::from_json(const Json& doc) {
  const Json& root = doc.contains("config") ? doc.at("config") : doc;
  if (!root.is_object()) throw UsageError("JSON config must be an object of sections");
  ConfigValues cfg;
  for (const auto& [section, body] : root.items()) {
    if (!body.is_object()) throw UsageError("JSON config section '" + section + "' is not an object");
    for (const auto& [key, value] : body.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_boolean()) {
        text = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        text = value.dump();
      } else if (value.is_number()) {
        text = format_double(value.get<double>());
      } else if (value.is_array()) {
        for (const auto& v : value) {
          if (!text.empty()) text += ',';
          text += v.is_number() ? format_double(v.get<double>()) : v.dump();
        }
      } else {
        throw UsageError("JSON config value '" + section + "." + key + "' has an unsupported type");
      }
      cfg.set(section + "." + key, text);
    }
  }
  return cfg;
}

std::optional<std::string> ConfigValues::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ConfigValues::set(const std::string& key, std::string value) {
  check_known(key);
  values_[key] = std::move(value);
}

void ConfigValues::merge_over(const ConfigValues& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

double get_double(const ConfigValues& cfg, const std::string& key, std::optional<double> fallback) {
  const auto text = cfg.get(key);
  if (!text) {
    if (!fallback) throw UsageError("missing required value '" + key + "'");
    return *fallback;
  }
  const char* begin = text->c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw UsageError("value '" + *text + "' for '" + key + "' is not a finite number");
  }
  return v;
}

std::size_t get_count(const ConfigValues& cfg, const std::string& key,
                      std::optional<std::size_t> fallback) {
  const auto text = cfg.get(key);
  if (!text) {
    if (!fallback) throw UsageError("missing required value '" + key + "'");
    return *fallback;
  }
  // Accept "1e3" style counts as long as they are whole numbers.
  const double v = get_double(cfg, key, std::nullopt);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
    throw UsageError("value '" + *text + "' for '" + key + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::uint64_t get_seed(const ConfigValues& cfg, const std::string& key, std::uint64_t fallback) {
  const auto text = cfg.get(key);
  if (!text) return fallback;
  std::uint64_t v = 0;
  const char* end = text->data() + text->size();
  const auto [ptr, ec] = std::from_chars(text->data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("value '" + *text + "' for '" + key + "' is not an unsigned 64-bit integer");
  }
  return v;
}

bool get_bool(const ConfigValues& cfg, const std::string& key, bool fallback) {
  const auto text = cfg.get(key);
  if (!text) return fallback;
  if (*text == "true" || *text == "1" || *text == "yes" || *text == "on") return true;
  if (*text == "false" || *text == "0" || *text == "no" || *text == "off") return false;
  throw UsageError("value '" + *text + "' for '" + key + "' is not a boolean");
}

std::string get_string(const ConfigValues& cfg, const std::string& key,
                       std::optional<std::string> fallback) {
  const auto text = cfg.get(key);
  if (!text) {
    if (!fallback) throw UsageError("missing required value '" + key + "'");
    return *fallback;
  }
  return *text;
}

std::vector<double> get_double_list(const ConfigValues& cfg, const std::string& key) {
  const auto text = cfg.get(key);
  std::vector<double> out;
  if (!text) return out;
  std::istringstream in(*text);
  std::string item;
  while (std::getline(in, item, ',')) {
    ConfigValues one;
    one.set(key, trim(item));
    out.push_back(get_double(one, key, std::nullopt));
  }
  if (out.empty()) throw UsageError("'" + key + "' is empty");
  return out;
}

}  // namespace squeezetrack::cli
