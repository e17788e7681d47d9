#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinklab/multikink.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

enum class ValueKind { Real, Integer, Bool, Text, RealList, CosineList };

struct ConfigKey {
  std::string name;
  ValueKind kind;
  std::string help;
};

// Every key a config file may set, in serialization order.
const std::vector<ConfigKey>& config_schema();

// Experiment parameters as `key = value` lines; '#' starts a comment. Values
// are kept as written (trimmed) after type checking, so serialize(parse(s))
// reproduces the settings exactly.
class ExperimentConfig {
 public:
  // ConfigError on unknown keys, duplicates and ill-typed values.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string serialize() const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  // Type-checked assignment; ConfigError as for parse.
  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::string>& values() const { return values_; }

  // ConfigError when the key is absent and there is no fallback.
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback = false) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<CosineTerm> cosines(const std::string& key) const;

  bool operator==(const ExperimentConfig&) const = default;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

// Comma-separated reals, e.g. "-6,6"; ConfigError on malformed input.
std::vector<double> parse_real_list(const std::string& s);

// "phi4", "sine-gordon", or "custom" built from potential.coefficients and
// potential.cosines. ConfigError for a custom potential without a table;
// InvalidPotential for unknown names.
PotentialModel potential_from_config(const ExperimentConfig& config);

// Sorted positions from the `positions` key.
Positions positions_from_config(const ExperimentConfig& config);

}  // namespace kinklab
