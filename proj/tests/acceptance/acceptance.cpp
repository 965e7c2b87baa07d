// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance <scenario-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lightfol/checks.hpp"
#include "lightfol/report.hpp"
#include "support.hpp"

using namespace lightfol;

namespace {

std::string g_dir;

ScenarioFile load(const std::string& name) { return load_scenario(g_dir + "/" + name + ".scn"); }

BundleEngine engine_for(const ScenarioFile& s) {
  return BundleEngine(FoliationEngine(*s.metric, foliation_spec(s), scenario_samples(s).front()), s.complement);
}

std::vector<std::string> shipped_names() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(g_dir))
    if (e.path().extension() == ".scn") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("uncaught: ") + e.what()};
  }
  if (!o.pass) ++g_failures;
  std::cout << 'C' << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [" << o.detail << "]\n";
  std::cout.flush();
}

// ---------------------------------------------------------------------------

Outcome flat_corollary() {
  Outcome o;
  double worst_nn = 0, worst_nf = 0, worst_kappa = 0, worst_h = 0, slowest = 0;
  for (auto [n, s] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}, {5, 1}, {5, 3}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const LightlikeFunctionScenario sc = flat_corollary_scenario(n, s);
    const std::vector<Point> samples =
        sample_box(Box{std::vector<double>(n, -2.0), std::vector<double>(n, 2.0)}, 16, 1000 + n * 10 + s);
    o.pass &= verify_lightlike(sc, samples).pass;
    const BundleEngine eng = levelset_bundle(sc, samples.front());
    for (const Point& p : samples) {
      const JetMat g = metric_at(sc.metric, p);
      const JetVec nv = build_N_levelset(sc, p);
      worst_nn = std::max(worst_nn, std::abs(inner(g, nv, nv).value()));
      worst_nf = std::max(worst_nf, std::abs(derivative_along(nv, eval_jet(sc.f, p)).value() - 1.0));
      const FrameBundle b = eng.build(p);
      const KappaN k = kappa_N(sc, b);
      worst_kappa = std::max({worst_kappa, std::abs(k.by_definition), std::abs(k.by_formula)});
      for (const auto& x : b.tangent)
        for (const auto& y : b.tangent)
          worst_h = std::max(worst_h, std::abs(second_fundamental_form(sc, b, values(x), values(y)).coefficient));
    }
    const VectorField grad = VectorField::constant(gradient(sc.metric, sc.f, samples.front()));
    o.pass &= is_killing(sc.metric, sc.v, samples).killing;
    o.pass &= is_killing(sc.metric, grad, samples).killing;
    slowest = std::max(slowest, seconds_since(t0));
  }
  o.pass &= worst_nn < 1e-12 && worst_nf < 1e-12 && worst_kappa < 1e-10 && worst_h < 1e-12 && slowest < 1.0;
  o.detail = "g(N,N) " + fmt(worst_nn) + ", N(f)-1 " + fmt(worst_nf) + ", kappa(N) " + fmt(worst_kappa) + ", h " +
             fmt(worst_h) + ", slowest " + fmt(slowest) + " s";
  return o;
}

// Conformally flat R^n_s, e^{2φ} diag(ε), foliated by the null hyperplane
// families x_i + x_{s+i} = const for i < r, with random polynomial complements.
std::string random_ltr_scenario(testgen::Rng& rng, int n, int s, int r) {
  const std::string phi = testgen::polynomial(rng, n, 2, 2, 0.3).to_string();
  std::ostringstream t;
  t.precision(17);
  t << "[manifold]\ndim = " << n << "\nindex = " << s << "\nmetric = diag(";
  for (int i = 0; i < n; ++i) t << (i ? ", " : "") << (i < s ? "-" : "") << "exp(2*(" << phi << "))";
  t << ")\n[foliation]\n";
  for (int i = 1; i <= r; ++i) t << "level = x" << i << " + x" << s + i << "\n";
  t << "[complement]\n";
  for (int i = 0; i < r; ++i) {
    t << "V = (";
    for (int k = 0; k < n; ++k) t << (k ? ", " : "") << testgen::polynomial(rng, n, 2, 2).to_string();
    t << ")\n";
  }
  t << "[sampling]\nbox = -1, 1\ncount = 3\nseed = " << rng.integer(1, 1 << 30) << "\n";
  return t.str();
}

Outcome ltr_postconditions() {
  testgen::Rng rng(2024);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int singular = 0, other = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(3, 6), s = rng.integer(1, n - 1), r = rng.integer(1, std::min(s, n - s));
    const ScenarioFile scn = parse_scenario(random_ltr_scenario(rng, n, s, r));
    try {
      const BundleEngine eng = engine_for(scn);
      for (const Point& p : scenario_samples(scn)) {
        const FrameBundle b = eng.build(p);
        const JetMat g = metric_at(*scn.metric, p);
        for (int i = 0; i < b.r; ++i) {
          for (int j = 0; j < b.r; ++j) {
            worst = std::max(worst, std::abs(inner(g, b.N[i], b.xi[j]).value() - (i == j)));
            worst = std::max(worst, std::abs(inner(g, b.N[i], b.N[j]).value()));
          }
          for (const auto& w : b.W) worst = std::max(worst, std::abs(inner(g, b.N[i], w).value()));
          for (const auto& x : b.X) worst = std::max(worst, std::abs(inner(g, b.N[i], x).value()));
        }
      }
    } catch (const Error& e) {
      (e.kind() == ErrorKind::SingularPairing ? singular : other) += 1;
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && other == 0 && secs < 30.0,
          "max residual " + fmt(worst) + ", singular " + std::to_string(singular) + ", other errors " +
              std::to_string(other) + ", " + fmt(secs) + " s"};
}

Outcome kappa_routes() {
  double worst = 0, largest = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 4 + k % 2;
    const double c = 0.25 + 0.125 * k, d = 0.05 * (k % 5);
    std::ostringstream t;
    t << "[manifold]\ndim = " << n << "\nindex = 1\nmetric = diag(1";
    const std::string w = "exp(2*(" + std::to_string(c) + "*x1 + " + std::to_string(d) + "*x1^2))";
    for (int i = 1; i < n; ++i) t << ", " << (i == 1 ? "-" : "") << w;
    t << ")\n[foliation]\nlevel = x1\nlevel = sqrt(" << n - 2 << ")*x2";
    for (int i = 3; i <= n; ++i) t << " + x" << i;
    t << "\n[complement]\nV = (0, 1";
    for (int i = 2; i < n; ++i) t << ", 0";
    t << ")\n[sampling]\nbox = -1, 1\ncount = 50\nseed = " << 300 + k << "\n";
    const ScenarioFile s = parse_scenario(t.str());
    const BundleEngine eng = engine_for(s);
    for (const Point& p : scenario_samples(s)) {
      const FrameBundle b = eng.build(p);
      for (int j = 0; j < n; ++j) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[j] = 1.0;
        const double k1 = kappa(b, e), k2 = kappa(b, e, KappaRoute::MeanCurvature);
        worst = std::max(worst, std::abs(k1 - k2));
        largest = std::max(largest, std::abs(k1));
      }
    }
  }
  return {worst < 1e-8, "max |difference| " + fmt(worst) + " over 20 x 50 samples, max |kappa| " + fmt(largest)};
}

Outcome rummler() {
  Outcome o;
  double worst = 0, broken = 0;
  int scenarios = 0;
  for (const auto& name : shipped_names()) {
    const ScenarioFile s = load(name);
    const auto avail = available_checks(s);
    if (std::find(avail.begin(), avail.end(), "rummler") == avail.end()) continue;
    const Report r = run_checks(s, std::vector<std::string>{"rummler"});
    if (name == "broken_kappa") {
      broken = r.checks[0].max_residual;
      o.pass &= broken > 1e-2;
    } else {
      ++scenarios;
      worst = std::max(worst, r.checks[0].max_residual);
    }
  }
  o.pass &= worst < 1e-7 && scenarios > 0;
  o.detail = std::to_string(scenarios) + " scenarios, max residual " + fmt(worst) + ", broken_kappa " + fmt(broken);
  return o;
}

double divergence_max(const std::string& name, DivergenceForm form) {
  const ScenarioFile s = load(name);
  const BundleEngine eng = engine_for(s);
  double worst = 0;
  for (const Point& p : scenario_samples(s))
    worst = std::max(worst, divergence_identity_residual(eng.build(p), s.divergence_field->at(p),
                                                         Convention::FactorialAlternation, form));
  return worst;
}

Outcome divergence() {
  const double flat = divergence_max("divergence_flat", DivergenceForm::Literal);
  const double warped = divergence_max("divergence_warped", DivergenceForm::Literal);
  const double flip = divergence_max("sign_flip", DivergenceForm::SignFlip);
  const double corrected = divergence_max("divergence_corrected", DivergenceForm::Corrected);
  return {flat < 1e-6 && warped < 1e-6 && flip > 1e-6,
          "literal flat " + fmt(flat) + ", literal warped " + fmt(warped) + ", sign flip " + fmt(flip) +
              ", corrected warped " + fmt(corrected)};
}

JetMat random_gauge(testgen::Rng& rng, int r, int n, const Point& p, bool invertible_diag, double off) {
  JetMat m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Expression e = testgen::polynomial(rng, n, 2, 2, off);
      if (i == j && invertible_diag) e = Expression::literal(2.0) + e;
      m(i, j) = eval_jet(e, p);
    }
  return m;
}

// The trace law is exercised in three regimes. For r = 1 any (f, a, b) keeps
// tr(TF) fixed. For r = 2 with a = 0 it stays fixed as well. For r = 2 with
// a ≠ 0 the new N' picks up a ξ component, tr(TF) moves, and the trace of
// f⁻¹df no longer accounts for the whole change of κ.
Outcome gauge() {
  testgen::Rng rng(606);
  double law_r1 = 0, law_r2_a0 = 0, law_r2 = 0, worst_closed = 0, largest_lhs = 0;
  for (const char* name : {"warped_exp", "fol45_n4_s2", "gauge_r2"}) {
    const ScenarioFile s = load(name);
    const BundleEngine eng = engine_for(s);
    for (const Point& p : scenario_samples(s)) {
      const FrameBundle b = eng.build(p);
      for (int t = 0; t < 6; ++t) {
        const JetMat f = random_gauge(rng, b.r, b.n, p, true, 0.3);
        const JetMat a = random_gauge(rng, b.r, b.n, p, false, 0.5);
        const JetMat bm = random_gauge(rng, b.r, b.n, p, true, 0.2);
        const auto z = testgen::point(rng, b.n);
        const GaugeDelta d = kappa_gauge_delta(b, f, a, bm, z);
        largest_lhs = std::max(largest_lhs, std::abs(d.lhs));
        worst_closed = std::max(worst_closed, transform_ltr(b, f, a, bm).residual);
        if (b.r == 1) {
          law_r1 = std::max(law_r1, std::abs(d.lhs - d.rhs));
          continue;
        }
        law_r2 = std::max(law_r2, std::abs(d.lhs - d.rhs));
        JetMat zero(b.r, b.r);
        for (int i = 0; i < b.r; ++i)
          for (int j = 0; j < b.r; ++j) zero(i, j) = Jet(0.0);
        const GaugeDelta d0 = kappa_gauge_delta(b, f, zero, bm, z);
        law_r2_a0 = std::max(law_r2_a0, std::abs(d0.lhs - d0.rhs));
        worst_closed = std::max(worst_closed, transform_ltr(b, f, zero, bm).residual);
      }
    }
  }
  return {law_r1 < 1e-7 && law_r2_a0 < 1e-7 && law_r2 < 1e-7 && worst_closed < 1e-8 && largest_lhs > 1e-3,
          "law r=1 " + fmt(law_r1) + ", r=2 with a=0 " + fmt(law_r2_a0) + ", r=2 random a " + fmt(law_r2) +
              ", N' closed form " + fmt(worst_closed) + ", max |lhs| " + fmt(largest_lhs)};
}

JetVec random_field(testgen::Rng& rng, int n, const Point& p) {
  JetVec y;
  for (int i = 0; i < n; ++i) y.push_back(eval_jet(testgen::polynomial(rng, n, 3, 2), p));
  return y;
}

Outcome rad_q_torsion() {
  testgen::Rng rng(707);
  double worst_rad = 0, worst_tor = 0;
  int scenarios = 0;
  for (const auto& name : shipped_names()) {
    const ScenarioFile s = load(name);
    if (s.kind != ScenarioKind::Foliation) continue;
    ++scenarios;
    const BundleEngine eng = engine_for(s);
    for (const Point& p : scenario_samples(s)) {
      const FrameBundle b = eng.build(p);
      worst_rad = std::max(worst_rad, rad_Q_check(b).residual);
      for (int t = 0; t < 3; ++t)
        worst_tor = std::max(worst_tor, torsion_Q(b, random_field(rng, b.n, p), random_field(rng, b.n, p)));
    }
  }
  return {worst_rad < 1e-9 && worst_tor < 1e-8, std::to_string(scenarios) + " scenarios, rad_Q " +
                                                     fmt(worst_rad) + ", torsion " + fmt(worst_tor)};
}

Outcome flow_suite() {
  const ScenarioFile s = load("flat_flow");
  const FlowScenario fs = flow_scenario(s);
  double post = 0, lie = 0, eq = 0;
  for (const Point& p : scenario_samples(s)) {
    const FlowN n = build_N_flow(fs, p);
    post = std::max({post, n.pairing_residual, n.null_residual});
    lie = std::max(lie, n.lie_residual);
    for (Convention c : {Convention::UnitShuffle, Convention::FactorialAlternation}) {
      const ComplementedReport r = complemented_checks(fs, p, c);
      eq = std::max({eq, r.bracket_WN, r.d_mu, r.d_eta, r.mu_basic, r.eta_basic, r.h_coefficient, r.h_bracket});
    }
  }
  const auto field = [](std::vector<std::string> c) { return VectorField::parse(c, static_cast<int>(c.size())); };
  const std::vector<FlowScenario> others{
      fs,
      {MetricField::flat(4, 1), field({"1", "1", "0", "0"}), field({"1", "0", "0", "0"}), std::nullopt},
      {MetricField::flat(5, 2), field({"1", "0", "1", "0", "0"}), field({"1", "0", "0", "0", "0"}), std::nullopt},
  };
  int isotropic = 0;
  for (const auto& f : others) isotropic += flow_kind(f) == FoliationKind::Isotropic;
  return {post < 1e-9 && lie < 1e-8 && eq < 1e-10 && isotropic == static_cast<int>(others.size()),
          "N postconditions " + fmt(post) + ", L_xi N " + fmt(lie) + ", complemented " + fmt(eq) + ", isotropic " +
              std::to_string(isotropic) + "/" + std::to_string(others.size())};
}

Outcome warped_radical() {
  Outcome o;
  double worst = 0;
  for (const char* name : {"warped_line", "warped_levelset"}) {
    const ScenarioFile s = load(name);
    for (const Point& p : scenario_samples(s)) {
      const FibreRadical r = fibre_radical_check(*s.warped, p);
      worst = std::max(worst, r.span_residual);
      o.pass &= r.rank == s.warped->rho.value_or(-1);
    }
  }
  o.pass &= worst < 1e-9;
  o.detail = "span residual " + fmt(worst) + (o.pass ? ", ranks match" : ", rank mismatch");
  return o;
}

FormField random_form(testgen::Rng& rng, int n, int k) {
  FormField f(n, k);
  for (const auto& idx : subsets(n, k)) f.set(idx, testgen::polynomial(rng, n, 2, 3));
  return f;
}

Outcome infrastructure() {
  testgen::Rng rng(808);
  double ad = 0, dd = 0, cartan = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(1, 4);
    const Expression e = testgen::tree(rng, n, 4);
    const Point p = testgen::point(rng, n);
    const Jet j = eval_jet(e, p);
    for (int i = 0; i < n; ++i) {
      // Five-point stencil. Trees like cos((x + 4.75)^3) oscillate fast, so the
      // step has to be small for the O(h^4) truncation to drop below 1e-6.
      const double h = 1e-4;
      const auto at = [&](double off) {
        Point q = p;
        q[i] += off;
        return eval_value(e, q);
      };
      const double fd = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
      ad = std::max(ad, std::abs(j.grad(i) - fd) / (1 + std::abs(fd)));
    }
  }
  for (int t = 0; t < 150; ++t) {
    const int n = rng.integer(2, 5), k = rng.integer(0, n - 2);
    const Point p = testgen::point(rng, n);
    const FormJet a = random_form(rng, n, k).at(p);
    for (Convention c : {Convention::UnitShuffle, Convention::FactorialAlternation})
      dd = std::max(dd, exterior_derivative(exterior_derivative(a, c), c).max_abs() / (1 + a.max_abs()));
    const JetVec x = random_field(rng, n, p);
    std::vector<JetVec> ys;
    for (int i = 0; i < k; ++i) ys.push_back(random_field(rng, n, p));
    for (Convention c : {Convention::UnitShuffle, Convention::FactorialAlternation}) {
      const double lhs = evaluate(lie_form(x, a), ys, c).value(), rhs = lie_form_bracket(x, a, ys, c).value();
      cartan = std::max(cartan, std::abs(lhs - rhs) / (1 + std::abs(rhs)));
    }
  }
  int identical = 0, total = 0;
  for (const auto& name : shipped_names()) {
    const ScenarioFile s = load(name);
    std::ostringstream a, b;
    emit_report(run_checks(s), ReportFormat::JsonLines, a);
    emit_report(run_checks(s), ReportFormat::JsonLines, b);
    ++total;
    identical += a.str() == b.str();
  }
  return {ad < 1e-6 && dd < 1e-8 && cartan < 1e-8 && identical == total,
          "AD vs FD " + fmt(ad) + ", d^2 " + fmt(dd) + ", Cartan " + fmt(cartan) + ", identical json-lines " +
              std::to_string(identical) + "/" + std::to_string(total)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <scenario-dir>\n";
    return 2;
  }
  g_dir = argv[1];
  report(1, "flat corollary exact values", flat_corollary);
  report(2, "lightlike transversal postconditions on 200 random scenarios", ltr_postconditions);
  report(3, "kappa by definition equals kappa by mean curvature", kappa_routes);
  report(4, "Rummler identity on shipped scenarios", rummler);
  report(5, "divergence identity, literal coefficients", divergence);
  report(6, "gauge law for kappa and the N' closed form", gauge);
  report(7, "Rad Q equals ltr, torsion-free connection on Q", rad_q_torsion);
  report(8, "null Killing flow suite", flow_suite);
  report(9, "warped fibre radical", warped_radical);
  report(10, "AD, d^2, Cartan and json-lines determinism", infrastructure);
  return g_failures == 0 ? 0 : 1;
}
