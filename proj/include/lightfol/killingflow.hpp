#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightfol/exterior.hpp"
#include "lightfol/foliation.hpp"

namespace lightfol {

struct FlowScenario {
  MetricField metric;
  VectorField xi;
  VectorField v;
  std::optional<VectorField> w;
};

struct FlowValidation {
  double null_residual = 0.0;     // max |g(ξ, ξ)|
  double killing_residual = 0.0;  // max |L_ξ g|
  double min_pairing = 0.0;       // min |g(ξ, V)|
  bool valid = false;
};
FlowValidation validate_flow(const FlowScenario& s, const std::vector<Point>& samples);

struct FlowN {
  JetVec n;
  double pairing_residual = 0.0;  // |g(ξ, N) − 1|
  double null_residual = 0.0;     // |g(N, N)|
  double lie_residual = 0.0;      // |[ξ, N]|
  double lie_v = 0.0;             // |[ξ, V]|, the hypothesis behind L_ξ N = 0
};
FlowN build_N_flow(const FlowScenario& s, const Point& p);

// α = g(·, N).
FormJet alpha_form(const FlowScenario& s, const Point& p);
double alpha(const FlowScenario& s, const std::vector<double>& x, const Point& p);
double alpha_lie_residual(const FlowScenario& s, const Point& p);

struct DeltaResult {
  FormJet form;  // dα ∧ ω
  double basic_residual = 0.0;
  double closed_residual = 0.0;
};
// ω must be basic for the orbit foliation and closed.
DeltaResult delta_ingredient(const FlowScenario& s, const FormField& omega, const Point& p, double tol = 1e-8);

struct ComplementedReport {
  double bracket_WN = 0.0;
  double d_mu = 0.0;
  double d_eta = 0.0;
  double mu_basic = 0.0;
  double eta_basic = 0.0;
  double h_coefficient = 0.0;  // 2 (dμ)(N, W)
  double h_bracket = 0.0;      // g(ξ, [W, N])
  std::string condition3 = "assumed";
};
// Throws HypothesisFailure naming the violated condition.
ComplementedReport complemented_checks(const FlowScenario& s, const Point& p, Convention conv,
                                       double tol = 1e-8);

// Orbits of ξ: m = 1, q = n − 1, r = 1.
FoliationKind flow_kind(const FlowScenario& s);

}  // namespace lightfol
