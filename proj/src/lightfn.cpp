#include "lightfol/lightfn.hpp"

#include <cmath>
#include <limits>

namespace lightfol {

namespace {

double inf_norm(const Jet& f, int n) {
  double m = 0.0;
  for (int j = 0; j < n; ++j) m = std::max(m, std::abs(f.grad(j)));
  return m;
}

double dot_df(const Jet& f, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += f.grad(static_cast<int>(j)) * v[j];
  return s;
}

}  // namespace

LightlikeReport verify_lightlike(const LightlikeFunctionScenario& s, const std::vector<Point>& samples, double tol) {
  LightlikeReport r;
  r.min_gradient = std::numeric_limits<double>::infinity();
  const int n = s.metric.dim();
  for (const Point& p : samples) {
    const MetricJet mj = metric_jet(s.metric, p, 1);
    const Jet f = eval_jet(s.f, p, 1);
    const JetVec grad = gradient(mj, f);
    const double res = std::abs(inner(mj.g, grad, grad).value());
    r.null_residuals.push_back(res);
    if (res >= r.max_null) {
      r.max_null = res;
      r.worst = p;
    }
    const double gn = inf_norm(f, n);
    if (gn < r.min_gradient) {
      r.min_gradient = gn;
      if (gn <= tol) r.worst = p;
    }
  }
  r.pass = r.max_null <= tol && r.min_gradient > tol;
  return r;
}

void require_lightlike(const LightlikeFunctionScenario& s, const std::vector<Point>& samples, double tol) {
  const LightlikeReport r = verify_lightlike(s, samples, tol);
  if (r.pass) return;
  std::string where;
  for (double x : r.worst) where += (where.empty() ? "" : ", ") + std::to_string(x);
  throw Error(ErrorKind::NotLightlikeFunction, "null residual " + std::to_string(r.max_null) + ", min |df| " +
                                                   std::to_string(r.min_gradient) + " at (" + where + ")");
}

JetVec build_N_levelset(const LightlikeFunctionScenario& s, const Point& p) {
  const MetricJet mj = metric_jet(s.metric, p);
  const Jet f = eval_jet(s.f, p);
  const JetVec v = s.v.at(p);
  const Jet vf = derivative_along(v, f);
  if (std::abs(vf.value()) < 1e-9) throw Error(ErrorKind::DegeneratePairing, "V(f) vanishes");
  const Jet gvv = inner(mj.g, v, v);
  return (Jet(1.0) / vf) * (v - (0.5 * gvv / vf) * gradient(mj, f));
}

FoliationEngine levelset_foliation(const LightlikeFunctionScenario& s, const Point& plan_point) {
  FoliationSpec spec;
  spec.n = s.metric.dim();
  spec.source = LevelFunctions{{s.f}, {}};
  const Expression f = s.f;
  spec.radical = [f](const Point& p, const MetricJet& mj) {
    return std::vector<JetVec>{gradient(mj, eval_jet(f, p))};
  };
  spec.screen_seed = s.screen_seed;
  return FoliationEngine(s.metric, spec, plan_point);
}

BundleEngine levelset_bundle(const LightlikeFunctionScenario& s, const Point& plan_point) {
  return BundleEngine(levelset_foliation(s, plan_point), {s.v});
}

SecondFundamental second_fundamental_form(const LightlikeFunctionScenario& s, const FrameBundle& b,
                                          const std::vector<double>& x, const std::vector<double>& y) {
  const Jet f = eval_jet(s.f, b.p);
  const double scale = std::max(1.0, inf_norm(f, b.n));
  if (std::abs(dot_df(f, x)) > 1e-8 * scale || std::abs(dot_df(f, y)) > 1e-8 * scale)
    throw Error(ErrorKind::NotTangent, "X or Y is not tangent to the level set");
  const JetVec yfield = tan_field(b, constant_vector(y));
  const std::vector<double> nab = values(covariant(b.metric, constant_vector(x), yfield));
  const std::vector<double> h = values(tra_field(b, constant_vector(nab)));
  SecondFundamental r;
  r.coefficient = dot_df(f, h);
  r.hessian = hessian_tensor(b.metric, f, constant_vector(x), constant_vector(y)).value();
  r.residual = std::abs(r.coefficient + r.hessian);
  return r;
}

KappaN kappa_N(const LightlikeFunctionScenario& s, const FrameBundle& b) {
  check_complete(b);
  const Jet f = eval_jet(s.f, b.p);
  const JetVec& xi = b.xi.at(0);
  const JetVec& nn = b.N.at(0);
  const JetVec& v = b.V.at(0);
  const Jet vf = derivative_along(v, f);
  const double gvv = inner(b.metric.g, v, v).value();
  KappaN r;
  r.lie_xi_NN = bilinear(lie_derivative_metric(b.metric, xi), nn, nn).value();
  const JetMat lv = lie_derivative_metric(b.metric, v);
  for (std::size_t a = 0; a < b.X.size(); ++a) r.trace_LV += b.eps_X[a] * bilinear(lv, b.X[a], b.X[a]).value();
  r.box_f = laplace_beltrami(b.metric, f).value();
  r.hess_xi_N = hessian_tensor(b.metric, f, xi, nn).value();
  const double vfv = vf.value();
  r.by_formula = 0.5 * (r.lie_xi_NN - (1.0 / vfv) * (r.trace_LV - (gvv / vfv) * (r.box_f - 2.0 * r.hess_xi_N)));
  r.by_definition = kappa(b, nn).value();
  r.residual = std::abs(r.by_formula - r.by_definition);
  return r;
}

LightlikeFunctionScenario flat_corollary_scenario(int n, int s) {
  if (n < 3 || s < 1 || s > n - 1)
    throw Error(ErrorKind::InvalidSignature, "need n >= 3 and 1 <= s <= n-1, got n = " + std::to_string(n) +
                                                 ", s = " + std::to_string(s));
  const double c = std::sqrt(static_cast<double>(n - s) / s);
  const Expression ce = unary(UnaryOp::Sqrt, Expression::literal(static_cast<double>(n - s) / s));
  Expression f;
  bool first = true;
  for (int i = 1; i <= n; ++i) {
    const Expression term = i <= s ? ce * Expression::coord(i) : Expression::coord(i);
    f = first ? term : f + term;
    first = false;
  }
  std::vector<VectorField> seed;
  for (int a = 1; a <= n - 2; ++a) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    if (a <= s - 1) {
      x[a - 1] = 1.0;
      x[n - 1] = -c;
    } else {
      x[a] = 1.0;
      x[n - 1] = -1.0;
    }
    seed.push_back(VectorField::constant(x));
  }
  std::vector<double> v(static_cast<std::size_t>(n), 1.0);
  for (int i = 1; i <= s - 1; ++i) v[i - 1] = -c;

  LightlikeFunctionScenario scn{MetricField::flat(n, s), f, VectorField::constant(v), seed};

  // Self-check: seed fields annihilate df and are independent.
  const Point origin(static_cast<std::size_t>(n), 0.0);
  const Jet fj = eval_jet(f, origin, 1);
  Eigen::MatrixXd m(n - 2, n);
  for (int a = 0; a < n - 2; ++a) {
    const std::vector<double> x = values(seed[a].at(origin, 0));
    if (std::abs(dot_df(fj, x)) > 1e-12) throw Error(ErrorKind::InvalidSeed, "screen seed not tangent");
    for (int j = 0; j < n; ++j) m(a, j) = x[j];
  }
  if (numeric_rank(m) < n - 2) throw Error(ErrorKind::InvalidSeed, "screen seed dependent");
  return scn;
}

ScreenIndex screen_index_check(const LightlikeFunctionScenario& s, const FrameBundle& b) {
  ScreenIndex r;
  for (int e : b.eps_X) r.negatives += e < 0;
  const JetMat& g = b.metric.g;
  const JetVec plus = b.xi.at(0) + Jet(0.5) * b.N.at(0);
  const JetVec minus = b.xi.at(0) - Jet(0.5) * b.N.at(0);
  r.plus_residual = std::abs(inner(g, plus, plus).value() - 1.0);
  r.minus_residual = std::abs(inner(g, minus, minus).value() + 1.0);
  const int idx = s.metric.declared_index();
  if (r.negatives != idx - 1)
    throw Error(ErrorKind::IndexMismatch, "screen index " + std::to_string(r.negatives) + " but s - 1 = " +
                                              std::to_string(idx - 1));
  return r;
}

}  // namespace lightfol
