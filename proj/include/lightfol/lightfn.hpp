#pragma once

#include <vector>

#include "lightfol/charforms.hpp"

namespace lightfol {

struct LightlikeFunctionScenario {
  MetricField metric;
  Expression f;
  VectorField v;
  std::vector<VectorField> screen_seed;
};

struct LightlikeReport {
  std::vector<double> null_residuals;  // |g(∇f, ∇f)| per sample
  double max_null = 0.0;
  double min_gradient = 0.0;  // min ‖df‖∞
  Point worst;
  bool pass = false;
};
LightlikeReport verify_lightlike(const LightlikeFunctionScenario& s, const std::vector<Point>& samples,
                                 double tol = 1e-9);
// Throws NotLightlikeFunction carrying the worst point.
void require_lightlike(const LightlikeFunctionScenario& s, const std::vector<Point>& samples, double tol = 1e-9);

// N = (1/V(f)) {V − ½ g(V,V)/V(f) ∇f}.
JetVec build_N_levelset(const LightlikeFunctionScenario& s, const Point& p);

// Level-set foliation with ξ = ∇f and complement V.
FoliationEngine levelset_foliation(const LightlikeFunctionScenario& s, const Point& plan_point);
BundleEngine levelset_bundle(const LightlikeFunctionScenario& s, const Point& plan_point);

struct SecondFundamental {
  double coefficient = 0.0;  // h(X, Y) = coefficient · N in Q
  double hessian = 0.0;      // Hess_f(X, Y)
  double residual = 0.0;     // |coefficient + Hess_f(X, Y)|
};
// X, Y must be tangent at p; Y is extended by tan(Y).
SecondFundamental second_fundamental_form(const LightlikeFunctionScenario& s, const FrameBundle& b,
                                          const std::vector<double>& x, const std::vector<double>& y);

struct KappaN {
  double lie_xi_NN = 0.0;   // (L_ξ g)(N, N)
  double trace_LV = 0.0;    // Σ ε_a (L_V g)(X_a, X_a)
  double box_f = 0.0;       // □f
  double hess_xi_N = 0.0;   // Hess_f(ξ, N)
  double by_formula = 0.0;
  double by_definition = 0.0;
  double residual = 0.0;
};
KappaN kappa_N(const LightlikeFunctionScenario& s, const FrameBundle& b);

// Flat ℝ^n_s with f = √((n−s)/s) Σ_{i≤s} x_i + Σ_{j>s} x_j and the standard
// screen seed and complement.
LightlikeFunctionScenario flat_corollary_scenario(int n, int s);

struct ScreenIndex {
  int negatives = 0;
  double plus_residual = 0.0;   // |g(ξ + N/2, ξ + N/2) − 1|
  double minus_residual = 0.0;  // |g(ξ − N/2, ξ − N/2) + 1|
};
// Throws IndexMismatch unless the screen index equals s − 1.
ScreenIndex screen_index_check(const LightlikeFunctionScenario& s, const FrameBundle& b);

}  // namespace lightfol
