#include "lightfol/checks.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>

namespace lightfol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A sample plus the adapted frames built there. Frame construction happens
// once per sample; a failure is stored and rethrown by every check that needs
// the frames, so it shows up as a per-check failure.
struct Sample {
  int index = 0;
  Point p;
  std::optional<FrameBundle> bundle;
  std::exception_ptr failure;

  const FrameBundle& frames() const {
    if (failure) std::rethrow_exception(failure);
    if (!bundle) throw Error(ErrorKind::Validation, "this check needs a foliation scenario");
    return *bundle;
  }
};

struct Context {
  const ScenarioFile& s;
  std::optional<BundleEngine> engine;
  std::optional<LightlikeFunctionScenario> lf;
  std::optional<FlowScenario> flow;
  std::exception_ptr plan_failure;

  const LightlikeFunctionScenario& lightfn() const {
    if (!lf) throw Error(ErrorKind::Validation, "needs a level-function scenario with radical = gradient and one V");
    return *lf;
  }
  const FlowScenario& flows() const {
    if (!flow) throw Error(ErrorKind::Validation, "needs a flow scenario");
    return *flow;
  }
  const WarpedSpec& warped() const {
    if (!s.warped) throw Error(ErrorKind::Validation, "needs a warped scenario");
    return *s.warped;
  }
};

using CheckFn = std::function<double(const Context&, const Sample&)>;

struct CheckDef {
  const char* name;
  double tolerance;
  CheckFn fn;
};

std::vector<double> unit(int n, int j) {
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  e[static_cast<std::size_t>(j)] = 1.0;
  return e;
}

std::vector<std::vector<double>> value_tuple(const std::vector<JetVec>& t) {
  std::vector<std::vector<double>> out;
  for (const auto& v : t) out.push_back(values(v));
  return out;
}

JetMat expression_matrix(const std::vector<Expression>& e, int r, const Point& p, double diag_default) {
  JetMat m(r, r);
  if (e.empty()) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) m(i, j) = Jet(i == j ? diag_default : 0.0);
    return m;
  }
  if (static_cast<int>(e.size()) != r * r)
    throw Error(ErrorKind::Validation, "gauge matrices need r*r = " + std::to_string(r * r) + " entries");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = eval_jet(e[static_cast<std::size_t>(i * r + j)], p);
  return m;
}

// Default gauge: ξ' = e^{x1/4} ξ, V' = V.
JetMat gauge_f(const Context& c, const Sample& s, int r) {
  if (!c.s.gauge_f.empty()) return expression_matrix(c.s.gauge_f, r, s.p, 1.0);
  JetMat f(r, r);
  const Jet e = eval_jet(parse_expression("exp(x1/4)", c.s.dim), s.p);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) f(i, j) = i == j ? e : Jet(0.0);
  return f;
}

std::vector<std::vector<double>> gauge_vectors(const Context& c) {
  if (c.s.gauge_z) return {*c.s.gauge_z};
  std::vector<std::vector<double>> zs;
  for (int j = 0; j < c.s.dim; ++j) zs.push_back(unit(c.s.dim, j));
  return zs;
}

double expected_number(const Context& c, const std::string& key) {
  const auto it = c.s.expect.find(key);
  if (it == c.s.expect.end()) return std::numeric_limits<double>::quiet_NaN();
  return eval_value(parse_expression(it->second, 0), {});
}

double kind_residual(const Context& c, FoliationKind k, const char* fallback) {
  const auto it = c.s.expect.find("kind");
  const std::string want = it != c.s.expect.end() ? it->second : std::string(fallback ? fallback : "");
  if (want.empty()) return 0.0;
  return std::string(kind_name(k)) == want ? 0.0 : 1.0;
}

// ---------------------------------------------------------------------------
// Generic foliation checks.

double check_ltr(const Context&, const Sample& s) { return ltr_residual(s.frames()); }

double check_rad_q(const Context&, const Sample& s) { return rad_Q_check(s.frames()).residual; }

double check_torsion(const Context&, const Sample& s) {
  const FrameBundle& b = s.frames();
  double worst = 0.0;
  for (int i = 0; i < b.n; ++i)
    for (int j = i + 1; j < b.n; ++j)
      worst = std::max(worst, torsion_Q(b, constant_vector(unit(b.n, i)), constant_vector(unit(b.n, j))));
  return worst;
}

double check_rummler(const Context& c, const Sample& s) {
  const FrameBundle& b = s.frames();
  double worst = 0.0;
  for (const auto& z : transversal_tuple(b))
    worst = std::max(worst, rummler_residual(b, z, c.s.convention, c.s.kappa_offset).residual);
  return worst;
}

double check_kappa_routes(const Context&, const Sample& s) {
  const FrameBundle& b = s.frames();
  double worst = 0.0;
  for (int j = 0; j < b.n; ++j) {
    const auto e = unit(b.n, j);
    worst = std::max(worst, std::abs(kappa(b, e) - kappa(b, e, KappaRoute::MeanCurvature)));
  }
  return worst;
}

double check_filtration(const Context& c, const Sample& s) {
  return rummler_filtration_check(s.frames(), c.s.convention, c.s.kappa_offset).defect;
}

double check_divergence(const Context& c, const Sample& s) {
  if (!c.s.divergence_field) throw Error(ErrorKind::Validation, "divergence needs divergence.Y in [options]");
  return divergence_identity_residual(s.frames(), c.s.divergence_field->at(s.p), c.s.convention, c.s.divergence,
                                      c.s.kappa_offset);
}

double check_tau_screen(const Context&, const Sample& s) {
  const FrameBundle& b = s.frames();
  double worst = 0.0;
  for (int j = 0; j < b.n; ++j) worst = std::max(worst, tau_screen_relation(b, unit(b.n, j)));
  return worst;
}

double check_gauge(const Context& c, const Sample& s) {
  const FrameBundle& b = s.frames();
  const JetMat f = gauge_f(c, s, b.r);
  const JetMat a = expression_matrix(c.s.gauge_a, b.r, s.p, 0.0);
  const JetMat bm = expression_matrix(c.s.gauge_b, b.r, s.p, 1.0);
  double worst = 0.0;
  for (const auto& z : gauge_vectors(c)) {
    const GaugeDelta d = kappa_gauge_delta(b, f, a, bm, z);
    worst = std::max(worst, std::abs(d.lhs - d.rhs));
  }
  return worst;
}

double check_nprime(const Context& c, const Sample& s) {
  const FrameBundle& b = s.frames();
  const JetMat f = gauge_f(c, s, b.r);
  const JetMat a = expression_matrix(c.s.gauge_a, b.r, s.p, 0.0);
  const JetMat bm = expression_matrix(c.s.gauge_b, b.r, s.p, 1.0);
  return transform_ltr(b, f, a, bm).residual;
}

double check_chi_nu(const Context& c, const Sample& s) {
  const FrameBundle& b = s.frames();
  const double chi = chi_F(b, value_tuple(tangent_tuple(b)), c.s.convention);
  const double nu = nu_F(b, value_tuple(transversal_tuple(b)), c.s.convention);
  return std::max(std::abs(chi - chi_constant(b, c.s.convention)), std::abs(nu - nu_constant(b, c.s.convention)));
}

double check_classification(const Context& c, const Sample& s) {
  if (c.s.kind == ScenarioKind::Flow) {
    const FlowScenario& fs = c.flows();
    return kind_residual(c, flow_kind(fs), fs.metric.dim() >= 3 ? "isotropic" : nullptr);
  }
  const FrameBundle& b = s.frames();
  // The radical rank at this sample must match the plan and the class.
  const double rank_gap = b.r == c.engine->foliation().r() ? 0.0 : 1.0;
  const char* fallback = c.lf ? "co-isotropic" : nullptr;
  return std::max(rank_gap, kind_residual(c, classify(b.m, b.q, b.r), fallback));
}

// ---------------------------------------------------------------------------
// Level-function checks.

double check_lightlike(const Context& c, const Sample& s) {
  const LightlikeReport r = verify_lightlike(c.lightfn(), {s.p});
  return r.pass ? r.max_null : std::max(r.max_null, 1.0);
}

double check_n_levelset(const Context& c, const Sample& s) {
  const auto& lf = c.lightfn();
  const JetVec nv = build_N_levelset(lf, s.p);
  const MetricJet mj = metric_jet(lf.metric, s.p);
  const Jet f = eval_jet(lf.f, s.p);
  return std::max(std::abs(inner(mj.g, nv, nv).value()), std::abs(derivative_along(nv, f).value() - 1.0));
}

double check_kappa_n(const Context& c, const Sample& s) {
  const KappaN k = kappa_N(c.lightfn(), s.frames());
  double r = k.residual;
  const double want = expected_number(c, "kappa_n");
  if (!std::isnan(want)) r = std::max(r, std::abs(k.by_definition - want));
  return r;
}

double check_second_fundamental(const Context& c, const Sample& s) {
  const FrameBundle& b = s.frames();
  const auto tuple = value_tuple(tangent_tuple(b));
  double worst = 0.0;
  for (const auto& x : tuple)
    for (const auto& y : tuple) worst = std::max(worst, second_fundamental_form(c.lightfn(), b, x, y).residual);
  return worst;
}

double check_killing_v(const Context& c, const Sample& s) {
  const auto& lf = c.lightfn();
  return is_killing(lf.metric, lf.v, {s.p}).max_residual;
}

double check_killing_grad(const Context& c, const Sample& s) {
  const auto& lf = c.lightfn();
  const MetricJet mj = metric_jet(lf.metric, s.p);
  const JetVec grad = gradient(mj, eval_jet(lf.f, s.p));
  return lie_derivative_metric(mj, grad).values().norm();
}

double check_screen_index(const Context& c, const Sample& s) {
  const ScreenIndex r = screen_index_check(c.lightfn(), s.frames());
  return std::max(r.plus_residual, r.minus_residual);
}

// ---------------------------------------------------------------------------
// Flow checks.

double check_flow_valid(const Context& c, const Sample& s) {
  const FlowValidation v = validate_flow(c.flows(), {s.p});
  const double r = std::max(v.null_residual, v.killing_residual);
  return v.valid ? r : std::max(r, 1.0);
}

double check_n_flow(const Context& c, const Sample& s) {
  const FlowN n = build_N_flow(c.flows(), s.p);
  return std::max(n.pairing_residual, n.null_residual);
}

double check_lie_n(const Context& c, const Sample& s) { return build_N_flow(c.flows(), s.p).lie_residual; }

double check_alpha(const Context& c, const Sample& s) {
  const FlowScenario& fs = c.flows();
  const double on_xi = std::abs(alpha(fs, values(fs.xi.at(s.p)), s.p) - 1.0);
  return std::max(on_xi, alpha_lie_residual(fs, s.p));
}

double check_complemented(const Context& c, const Sample& s) {
  const ComplementedReport r = complemented_checks(c.flows(), s.p, c.s.convention);
  return std::max({r.bracket_WN, r.d_mu, r.d_eta, r.mu_basic, r.eta_basic, std::abs(r.h_coefficient),
                   std::abs(r.h_bracket)});
}

// ---------------------------------------------------------------------------
// Warped checks.

double check_warped_radical(const Context& c, const Sample& s) {
  return fibre_radical_check(c.warped(), s.p).span_residual;
}

double check_warped_block(const Context& c, const Sample& s) {
  const WarpedSpec& w = c.warped();
  const int q = w.base.dim(), m = w.fibre.dim;
  const JetMat g = assemble_warped_metric(w, s.p);
  const JetMat gb = fibre_metric_at(w, s.p);
  const std::span<const double> base(s.p.data(), static_cast<std::size_t>(q));
  const double f = eval_value(w.warp, base);
  double worst = 0.0;
  for (int i = 0; i < q; ++i) {
    for (int k = 0; k < q; ++k) worst = std::max(worst, std::abs(g(i, k).value() - eval_value(w.base.entry(i, k), base)));
    for (int k = 0; k < m; ++k)
      worst = std::max({worst, std::abs(g(i, q + k).value()), std::abs(g(q + k, i).value())});
  }
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) worst = std::max(worst, std::abs(g(q + i, q + k).value() - f * f * gb(i, k).value()));
  return worst;
}

double check_warp_scaling(const Context& c, const Sample& s) {
  constexpr double kScale = 3.0;
  const WarpedSpec& w = c.warped();
  WarpedSpec scaled = w;
  scaled.warp = Expression::literal(kScale) * w.warp;
  const int q = w.base.dim(), m = w.fibre.dim, n = q + m;
  const JetMat g1 = assemble_warped_metric(w, s.p);
  const JetMat g2 = assemble_warped_metric(scaled, s.p);
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      worst = std::max(worst, std::abs(g2(q + i, q + k).value() - kScale * kScale * g1(q + i, q + k).value()));
  std::vector<JetVec> frame;
  for (int i = 0; i < m; ++i) frame.push_back(constant_vector(unit(n, q + i)));
  const auto r1 = radical_of_frame(g1, frame, nullptr);
  const auto r2 = radical_of_frame(g2, frame, nullptr);
  std::vector<std::vector<double>> a, b;
  for (const auto& v : r1) a.push_back(values(v));
  for (const auto& v : r2) b.push_back(values(v));
  return std::max(worst, span_distance(a, b));
}

const std::vector<CheckDef>& foliation_checks() {
  static const std::vector<CheckDef> defs = {
      {"ltr", 1e-8, check_ltr},
      {"rad_q", 1e-9, check_rad_q},
      {"torsion", 1e-8, check_torsion},
      {"rummler", 1e-7, check_rummler},
      {"kappa_routes", 1e-8, check_kappa_routes},
      {"rummler_filtration", 1e-7, check_filtration},
      {"divergence", 1e-6, check_divergence},
      {"tau_screen", 1e-8, check_tau_screen},
      {"gauge", 1e-7, check_gauge},
      {"nprime", 1e-8, check_nprime},
      {"chi_nu", 1e-9, check_chi_nu},
      {"classification", 0.5, check_classification},
  };
  return defs;
}

const std::vector<CheckDef>& lightfn_checks() {
  static const std::vector<CheckDef> defs = {
      {"lightlike", 1e-9, check_lightlike},
      {"n_levelset", 1e-9, check_n_levelset},
      {"kappa_n", 1e-7, check_kappa_n},
      {"second_fundamental", 1e-8, check_second_fundamental},
      {"killing_V", 1e-9, check_killing_v},
      {"killing_grad", 1e-9, check_killing_grad},
      {"screen_index", 1e-9, check_screen_index},
  };
  return defs;
}

const std::vector<CheckDef>& flow_checks() {
  static const std::vector<CheckDef> defs = {
      {"flow_valid", 1e-9, check_flow_valid},
      {"n_flow", 1e-9, check_n_flow},
      {"lie_N", 1e-8, check_lie_n},
      {"alpha", 1e-8, check_alpha},
      {"complemented", 1e-10, check_complemented},
      {"classification", 0.5, check_classification},
  };
  return defs;
}

const std::vector<CheckDef>& warped_checks() {
  static const std::vector<CheckDef> defs = {
      {"warped_radical", 1e-9, check_warped_radical},
      {"warped_block", 1e-12, check_warped_block},
      {"warp_scaling", 1e-9, check_warp_scaling},
  };
  return defs;
}

bool is_levelset(const ScenarioFile& s) {
  return s.kind == ScenarioKind::Foliation && s.radical_gradient && s.complement.size() == 1;
}

std::vector<const CheckDef*> definitions(const ScenarioFile& s) {
  std::vector<const CheckDef*> out;
  switch (s.kind) {
    case ScenarioKind::Foliation:
      if (is_levelset(s))
        for (const auto& d : lightfn_checks()) out.push_back(&d);
      for (const auto& d : foliation_checks()) out.push_back(&d);
      break;
    case ScenarioKind::Flow:
      for (const auto& d : flow_checks()) out.push_back(&d);
      break;
    case ScenarioKind::Warped:
      for (const auto& d : warped_checks()) out.push_back(&d);
      break;
  }
  return out;
}

const CheckDef* lookup(const ScenarioFile& s, const std::string& name) {
  for (const CheckDef* d : definitions(s))
    if (name == d->name) return d;
  return nullptr;
}

std::string describe(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const Error& err) {
    return std::string(kind_name(err.kind())) + ": " + err.what();
  } catch (const std::exception& err) {
    return err.what();
  }
}

}  // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass; });
}

std::vector<std::string> available_checks(const ScenarioFile& s) {
  std::vector<std::string> names;
  for (const CheckDef* d : definitions(s)) names.emplace_back(d->name);
  return names;
}

std::vector<std::string> registered_checks(const ScenarioFile& s) {
  return s.checks.empty() ? available_checks(s) : s.checks;
}

double default_tolerance(const std::string& check) {
  for (const auto* table : {&foliation_checks(), &lightfn_checks(), &flow_checks(), &warped_checks()})
    for (const auto& d : *table)
      if (check == d.name) return d.tolerance;
  throw Error(ErrorKind::Validation, "unknown check '" + check + "'");
}

Report run_checks(const ScenarioFile& s, const std::optional<std::vector<std::string>>& only,
                  std::optional<std::uint64_t> seed, std::optional<int> count) {
  const std::vector<std::string> names = only ? *only : registered_checks(s);
  std::vector<const CheckDef*> selected;
  for (const auto& n : names) {
    const CheckDef* d = lookup(s, n);
    if (!d) throw Error(ErrorKind::Validation, "check '" + n + "' does not apply to scenario '" + s.name + "'");
    selected.push_back(d);
  }

  Report rep;
  rep.scenario = s.name;
  rep.seed = seed.value_or(s.seed);
  rep.points = scenario_samples(s, seed, count);
  rep.convention = s.convention;
  rep.xi_provenance = s.xi_provenance();
  rep.complement_provenance = s.complement_provenance();

  Context ctx{s, std::nullopt, std::nullopt, std::nullopt, nullptr};
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < rep.points.size(); ++i) samples.push_back({static_cast<int>(i), rep.points[i], {}, {}});

  if (!selected.empty() && !samples.empty()) {
    try {
      if (s.kind == ScenarioKind::Foliation) {
        if (is_levelset(s)) ctx.lf = lightfn_scenario(s);
        // Pivots and screen choices are fixed at the first sample.
        ctx.engine.emplace(FoliationEngine(*s.metric, foliation_spec(s), samples.front().p), s.complement);
      } else if (s.kind == ScenarioKind::Flow) {
        ctx.flow = flow_scenario(s);
      }
    } catch (...) {
      ctx.plan_failure = std::current_exception();
    }
    if (s.kind == ScenarioKind::Foliation) {
      for (auto& smp : samples) {
        if (ctx.plan_failure) {
          smp.failure = ctx.plan_failure;
          continue;
        }
        try {
          smp.bundle = ctx.engine->build(smp.p);
        } catch (...) {
          smp.failure = std::current_exception();
        }
      }
    }
  }

  for (const CheckDef* d : selected) {
    CheckReport cr;
    cr.name = d->name;
    const auto t = s.tolerances.find(d->name);
    cr.tolerance = t != s.tolerances.end() ? t->second : d->tolerance;
    for (const auto& smp : samples) {
      SampleOutcome o;
      o.sample_index = smp.index;
      o.point = smp.p;
      try {
        if (ctx.plan_failure && s.kind != ScenarioKind::Foliation) std::rethrow_exception(ctx.plan_failure);
        o.residual = d->fn(ctx, smp);
        o.pass = std::isfinite(o.residual) && o.residual <= cr.tolerance;
      } catch (...) {
        o.residual = kInf;
        o.pass = false;
        o.error = describe(std::current_exception());
      }
      cr.max_residual = std::max(cr.max_residual, o.residual);
      cr.pass = cr.pass && o.pass;
      cr.samples.push_back(std::move(o));
    }
    rep.checks.push_back(std::move(cr));
  }
  return rep;
}

}  // namespace lightfol
