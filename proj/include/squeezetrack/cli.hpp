// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezetrack/io.hpp"

namespace squeezetrack::cli {

/// Every recognized configuration key as "section.key". Files holding any
/// other key are rejected.
const std::vector<std::string>& known_keys();

/// Flat key/value view of a configuration. Files use INI sections
///
///   [spectrum]
///   p = 2
///
/// or JSON objects of the same shape; a JSON document with a "config"
/// member (an emitted summary) is read through that member.
class ConfigValues {
 public:
  static ConfigValues load(const std::string& path);
  static ConfigValues parse_ini(const std::string& text);
  static ConfigValues from_json(const Json& doc);

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value);
  /// Flag values win over file values.
  void merge_over(const ConfigValues& overrides);
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Typed accessors. Malformed values raise UsageError naming the key.
double get_double(const ConfigValues& cfg, const std::string& key, std::optional<double> fallback);
std::size_t get_count(const ConfigValues& cfg, const std::string& key,
                      std::optional<std::size_t> fallback);
std::uint64_t get_seed(const ConfigValues& cfg, const std::string& key, std::uint64_t fallback);
bool get_bool(const ConfigValues& cfg, const std::string& key, bool fallback);
std::string get_string(const ConfigValues& cfg, const std::string& key,
                       std::optional<std::string> fallback);
std::vector<double> get_double_list(const ConfigValues& cfg, const std::string& key);

/// Maps an exception to the documented exit code: 2 usage, 3 validation or
/// feasibility, 4 numeric, 1 anything else.
int exit_code_for(const std::exception& err);

/// Entry point of the squeezetrack executable.
int run_cli(int argc, char** argv);

}  // namespace squeezetrack::cli
