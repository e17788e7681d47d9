#pragma once

#include <string>
#include <vector>

#include "kinklab/config.hpp"

namespace kinklab {

struct Measurement {
  std::string label;
  double value;
  std::string bound;  // human-readable acceptance condition
  bool pass;
};

struct CriterionReport {
  std::string name;
  std::vector<Measurement> measurements;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string error;  // set when the run threw
  bool passed() const;
};

// In the order they are run by `accept all`.
const std::vector<std::string>& criterion_names();

// Parameters of the checked-in configs/<name>.cfg. ConfigError for unknown
// names.
ExperimentConfig default_config(const std::string& name);

// Runs one criterion; failures of the underlying numerics are reported as a
// failed criterion, not thrown. The runtime budget is part of the verdict.
CriterionReport run_criterion(const std::string& name, const ExperimentConfig& config);

// "PASS <name> (<seconds> s)" followed by one indented line per measurement.
std::string format_report(const CriterionReport& report);

}  // namespace kinklab
