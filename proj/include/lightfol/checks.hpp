#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightfol/scenario.hpp"

namespace lightfol {

struct SampleOutcome {
  int sample_index = 0;
  Point point;
  double residual = 0.0;  // +inf when the check raised
  bool pass = false;
  std::string error;      // "<Kind>: message" when the check raised
};

struct CheckReport {
  std::string name;
  double tolerance = 0.0;
  std::vector<SampleOutcome> samples;  // in sample order
  double max_residual = 0.0;
  bool pass = true;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Point> points;
  Convention convention = Convention::UnitShuffle;
  std::string xi_provenance;
  std::string complement_provenance;
  std::vector<CheckReport> checks;  // in registration order

  bool pass() const;
};

// Names of every check that applies to the scenario's kind, in order.
std::vector<std::string> available_checks(const ScenarioFile& s);

// Checks that run by default: the [checks] list when present, otherwise all
// available ones.
std::vector<std::string> registered_checks(const ScenarioFile& s);

double default_tolerance(const std::string& check);

// Runs every selected check at every sample. Engine failures become failed
// samples; an unknown check name raises Error(Validation).
Report run_checks(const ScenarioFile& s, const std::optional<std::vector<std::string>>& only = std::nullopt,
                  std::optional<std::uint64_t> seed = std::nullopt, std::optional<int> count = std::nullopt);

}  // namespace lightfol
