#pragma once

// Run configuration: defaults, then alladiff.toml, then ALLADIFF_CACHE, then
// command-line flags (applied by the caller).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace alladiff {

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("output format must be csv or json, got '" + s + "'");
}

struct RunConfig {
  std::optional<std::filesystem::path> cache_dir;
  OutputFormat out = OutputFormat::csv;
  unsigned workers = 1;
  std::uint64_t naive_bound = kNaiveBound;
  int n_max_ceiling = 24;

  void validate() const {
    detail::require(workers >= 1, "workers must be >= 1");
    detail::require(naive_bound >= 1, "naive_bound must be positive");
    detail::require(n_max_ceiling >= 1, "n_max_ceiling must be positive");
  }
};

/// Flat "key = value" files: '#' comments, optional [section] headers that
/// prefix keys as "section.key", quoted or bare values.
inline std::map<std::string, std::string> parse_flat_toml(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      detail::require(line.back() == ']', where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos, where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    detail::require(!key.empty(), where + ": empty key");
    if (!value.empty() && value.front() == '"') {
      detail::require(value.size() >= 2 && value.back() == '"', where + ": unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    out[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

inline void apply_config_entries(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  auto number = [](const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(v, &pos);
      detail::require(pos == v.size() && x > 0, "");
      return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
      throw ValidationError("config key '" + key + "' needs a positive integer, got '" + v + "'");
    }
  };
  for (const auto& [k, v] : kv) {
    if (k == "cache_dir") cfg.cache_dir = v;
    else if (k == "out") cfg.out = parse_output_format(v);
    else if (k == "workers") cfg.workers = static_cast<unsigned>(number(k, v));
    else if (k == "naive_bound") cfg.naive_bound = number(k, v);
    else if (k == "n_max_ceiling") cfg.n_max_ceiling = static_cast<int>(number(k, v));
    else throw ValidationError("unknown config key '" + k + "'");
  }
}

/// Defaults, then the config file (explicit path, or ./alladiff.toml when
/// present), then ALLADIFF_CACHE.
inline RunConfig load_run_config(const std::optional<std::filesystem::path>& explicit_path = std::nullopt) {
  RunConfig cfg;
  std::optional<std::filesystem::path> path = explicit_path;
  if (!path && std::filesystem::exists("alladiff.toml")) path = "alladiff.toml";
  if (path) {
    std::ifstream in(*path);
    detail::require(static_cast<bool>(in), "cannot read config file " + path->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_entries(cfg, parse_flat_toml(ss.str()));
  }
  if (const char* env = std::getenv("ALLADIFF_CACHE"); env && *env) cfg.cache_dir = env;
  cfg.validate();
  return cfg;
}

}  // namespace alladiff
