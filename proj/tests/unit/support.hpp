#pragma once

// Hand-rolled generators shared by the unit suites. Everything is driven by the
// library's LCG so failures reproduce from the printed seed.

#include <cmath>
#include <string>
#include <vector>

#include "lightfol/sampling.hpp"
#include "lightfol/scenario.hpp"

namespace testgen {

using lightfol::Expression;
using lightfol::Point;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : lcg_(seed) {}
  double uniform(double lo, double hi) { return lcg_.uniform(lo, hi); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(lcg_.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (lcg_.next_u64() >> 40) & 1U; }

 private:
  lightfol::Lcg lcg_;
};

inline Point point(Rng& rng, int dim, double lo = -1.0, double hi = 1.0) {
  Point p(static_cast<std::size_t>(dim));
  for (auto& x : p) x = rng.uniform(lo, hi);
  return p;
}

// Σ c_t Π x_i^{e_ti} with total degree ≤ max_degree.
inline Expression polynomial(Rng& rng, int dim, int terms, int max_degree, double scale = 1.0) {
  Expression sum = Expression::literal(rng.uniform(-scale, scale));
  for (int t = 0; t < terms; ++t) {
    Expression term = Expression::literal(rng.uniform(-scale, scale));
    const int deg = rng.integer(1, max_degree);
    for (int d = 0; d < deg; ++d) term = term * Expression::coord(rng.integer(1, dim));
    sum = sum + term;
  }
  return sum;
}

// Random tree over the whole grammar, kept inside the domain of every partial
// function by wrapping arguments of sqrt/log in 2 + sin(·)^2-style guards.
inline Expression tree(Rng& rng, int dim, int depth) {
  using lightfol::BinaryOp;
  using lightfol::UnaryOp;
  if (depth == 0 || rng.integer(0, 4) == 0) {
    if (rng.coin()) return Expression::coord(rng.integer(1, dim));
    return Expression::literal(std::round(rng.uniform(0.0, 40.0)) / 8.0);
  }
  const Expression a = tree(rng, dim, depth - 1);
  switch (rng.integer(0, 8)) {
    case 0: return a + tree(rng, dim, depth - 1);
    case 1: return a - tree(rng, dim, depth - 1);
    case 2: return a * tree(rng, dim, depth - 1);
    case 3: return a / (Expression::literal(2.0) + lightfol::unary(UnaryOp::Cos, tree(rng, dim, depth - 1)));
    case 4: return lightfol::binary(BinaryOp::Pow, a, Expression::literal(rng.integer(2, 3)));
    case 5: return lightfol::unary(UnaryOp::Sin, a);
    case 6: return lightfol::unary(UnaryOp::Exp, lightfol::unary(UnaryOp::Cos, a));
    case 7:
      return lightfol::unary(UnaryOp::Sqrt,
                             Expression::literal(2.0) + lightfol::unary(UnaryOp::Sin, a));
    default:
      return lightfol::unary(UnaryOp::Log,
                             Expression::literal(3.0) + lightfol::unary(UnaryOp::Cos, a));
  }
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline lightfol::ScenarioFile shipped(const std::string& name) {
  return lightfol::load_scenario(std::string(LIGHTFOL_SCENARIO_DIR) + "/" + name + ".scn");
}

// Bundle engine for a foliation scenario, planned at its first sample.
inline lightfol::BundleEngine bundle_engine(const lightfol::ScenarioFile& s) {
  const Point plan = lightfol::scenario_samples(s).front();
  return lightfol::BundleEngine(lightfol::FoliationEngine(*s.metric, lightfol::foliation_spec(s), plan), s.complement);
}

}  // namespace testgen
