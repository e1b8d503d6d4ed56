// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_EXPERIMENTS_CONFIG_HPP_
#define EBM_EXPERIMENTS_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ebm/energy/family.hpp"

namespace ebm {

/// Parse or validation failure. Carries the 1-based line when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::optional<std::size_t> line = std::nullopt);
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::optional<std::size_t> line_;
};

enum class ValueType { kString, kInt, kDouble, kBool, kDoubleList };

using ConfigValue = std::variant<std::string, std::int64_t, double, bool, std::vector<double>>;

struct KeySpec {
  std::string key;
  ValueType type;
  ConfigValue default_value;
  std::string help;
  /// Numeric bounds apply to ints, doubles and every list entry.
  std::optional<double> min;
  bool min_exclusive = false;
  std::optional<double> max;
  bool max_exclusive = false;
  /// Allowed values for strings; empty means free text.
  std::vector<std::string> choices;
  bool required = false;
};

/// Every accepted key, in documentation order.
const std::vector<KeySpec>& config_schema();
/// Names accepted by the `experiment` key.
const std::vector<std::string>& experiment_names();
/// Names accepted by the `estimator` key.
const std::vector<std::string>& estimator_names();

/// Flat key/value configuration. Only explicitly set keys are stored; the
/// getters fall back to the experiment's defaults and then the schema's.
class ExperimentConfig {
 public:
  const std::string& experiment() const;
  std::uint64_t seed() const;

  bool has(std::string_view key) const { return values_.contains(std::string(key)); }
  /// Validates type and range; throws ConfigError naming the key.
  void set(const std::string& key, ConfigValue value);

  std::string get_string(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::size_t get_size(std::string_view key) const { return static_cast<std::size_t>(get_int(key)); }
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_list(std::string_view key) const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  const ConfigValue& lookup(std::string_view key, ValueType type) const;

  std::map<std::string, ConfigValue> values_;
};

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
/// Unknown or duplicate keys, type mismatches and range violations throw
/// ConfigError with the line number; missing required keys throw without one.
ExperimentConfig parse_config(std::string_view text);

/// Sorted `key = value` lines that parse back to an equal config.
std::string serialize_config(const ExperimentConfig& cfg);

/// Parses the value text for `key` according to its schema entry.
ConfigValue parse_value(const std::string& key, std::string_view text);

/// Family from a spec string: gaussian(d), mixture_rbf(K,d), poly1d(n), or
/// mlp(d,h1,...,1). Throws ConfigError on malformed specs.
EnergyFamily family_from_spec(std::string_view spec);

}  // namespace ebm

#endif  // EBM_EXPERIMENTS_CONFIG_HPP_
