#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lightfol/charforms.hpp"
#include "lightfol/killingflow.hpp"
#include "lightfol/lightfn.hpp"
#include "lightfol/sampling.hpp"
#include "lightfol/warped.hpp"

namespace lightfol {

enum class ScenarioKind { Foliation, Flow, Warped };

struct ScenarioFile {
  std::string name;
  ScenarioKind kind = ScenarioKind::Foliation;
  int dim = 0;
  int index = 0;
  std::optional<MetricField> metric;

  // [foliation]
  std::vector<Expression> levels;
  std::vector<int> pivots;  // 0-based
  std::vector<VectorField> frame;
  bool radical_gradient = false;
  std::vector<VectorField> screen_seed;
  std::vector<VectorField> perp_seed;
  // [complement]
  std::vector<VectorField> complement;

  // [flow]
  std::optional<VectorField> xi, v, w;

  // [warped]
  std::optional<WarpedSpec> warped;

  // [checks]
  std::vector<std::string> checks;

  // [sampling]
  std::vector<Point> points;
  std::optional<Box> box;
  int count = 0;
  std::uint64_t seed = 0;

  // [options]
  Convention convention = Convention::UnitShuffle;
  std::map<std::string, double> tolerances;
  double kappa_offset = 0.0;
  DivergenceForm divergence = DivergenceForm::Literal;
  std::optional<VectorField> divergence_field;
  std::vector<Expression> gauge_f, gauge_a, gauge_b;  // r × r, row major
  std::optional<std::vector<double>> gauge_z;
  std::map<std::string, std::string> expect;

  std::string xi_provenance() const;
  std::string complement_provenance() const;
};

// Throws ParseError (line, message) for syntax problems and Error(Validation)
// for structural ones.
ScenarioFile parse_scenario(const std::string& text, const std::string& name = "scenario");
ScenarioFile load_scenario(const std::string& path);

// Sample points: explicit points, or the box sampled with the file's seed.
std::vector<Point> scenario_samples(const ScenarioFile& s, std::optional<std::uint64_t> seed = std::nullopt,
                                    std::optional<int> count = std::nullopt);

// Scenario text for the flat corollary generator.
std::string fol45_scenario_text(int n, int s);

// Helpers exposed for the checks module.
FoliationSpec foliation_spec(const ScenarioFile& s);
LightlikeFunctionScenario lightfn_scenario(const ScenarioFile& s);
FlowScenario flow_scenario(const ScenarioFile& s);

}  // namespace lightfol
