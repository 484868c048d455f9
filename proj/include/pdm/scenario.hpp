#pragma once

// Scenario files: flat `key = value` lines with dotted keys, `#` comments.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdm/core.hpp"

namespace pdm::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  /// Every numeric key below `prefix.` except `prefix.kind` and the names in `skip`.
  ParamMap section_numbers(const std::string& prefix, const std::vector<std::string>& skip = {}) const;

  /// Line the key was read from; 0 for missing or overridden keys.
  int line_of(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  const std::string& source() const { return source_; }
  /// Sorted `key=value` pairs joined by "; ".
  std::string resolved() const;

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
  std::string source_;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
};

struct Overrides {
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<double> gamma;
};

struct Scenario {
  Config config;
  ScalarField1D mass;
  ScalarField1D potential;
  OrderingPreset ordering;
  Discretization theta{0.5};
  PhysicalConstants constants{};
  std::optional<Grid1D> grid;
};

/// Applies the overrides to the config (theta, ordering.alpha, ordering.gamma)
/// and validates catalog names, theta and the grid against mass singularities.
Scenario build_scenario(Config config, const Overrides& overrides = {});

}  // namespace pdm::cli
