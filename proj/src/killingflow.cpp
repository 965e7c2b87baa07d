#include "lightfol/killingflow.hpp"

#include <cmath>
#include <limits>

namespace lightfol {

FlowValidation validate_flow(const FlowScenario& s, const std::vector<Point>& samples) {
  FlowValidation v;
  v.min_pairing = std::numeric_limits<double>::infinity();
  for (const Point& p : samples) {
    const MetricJet mj = metric_jet(s.metric, p);
    const JetVec xi = s.xi.at(p);
    v.null_residual = std::max(v.null_residual, std::abs(inner(mj.g, xi, xi).value()));
    v.killing_residual = std::max(v.killing_residual, lie_derivative_metric(mj, xi).values().cwiseAbs().maxCoeff());
    v.min_pairing = std::min(v.min_pairing, std::abs(inner(mj.g, xi, s.v.at(p)).value()));
  }
  v.valid = v.null_residual <= 1e-9 && v.killing_residual <= 1e-9 && v.min_pairing >= 1e-6;
  return v;
}

FlowN build_N_flow(const FlowScenario& s, const Point& p) {
  const MetricJet mj = metric_jet(s.metric, p);
  const JetVec xi = s.xi.at(p), v = s.v.at(p);
  const Jet gxv = inner(mj.g, xi, v);
  if (std::abs(gxv.value()) < 1e-6 * std::max(1.0, mj.scale()))
    throw Error(ErrorKind::DegeneratePairing, "g(xi, V) vanishes");
  const Jet gvv = inner(mj.g, v, v);
  FlowN r;
  r.n = (Jet(1.0) / gxv) * (v - (gvv / (2.0 * gxv)) * xi);
  r.pairing_residual = std::abs(inner(mj.g, xi, r.n).value() - 1.0);
  r.null_residual = std::abs(inner(mj.g, r.n, r.n).value());
  r.lie_residual = max_abs(values(bracket(xi, r.n)));
  r.lie_v = max_abs(values(bracket(xi, v)));
  return r;
}

FormJet alpha_form(const FlowScenario& s, const Point& p) {
  const MetricJet mj = metric_jet(s.metric, p);
  return FormJet::one_form(mj.g * build_N_flow(s, p).n);
}

double alpha(const FlowScenario& s, const std::vector<double>& x, const Point& p) {
  return evaluate(alpha_form(s, p), {x});
}

double alpha_lie_residual(const FlowScenario& s, const Point& p) {
  return lie_form(s.xi.at(p), alpha_form(s, p)).max_abs();
}

DeltaResult delta_ingredient(const FlowScenario& s, const FormField& omega, const Point& p, double tol) {
  const FormJet w = omega.at(p);
  const std::vector<JetVec> frame = {s.xi.at(p)};
  const BasicResult basic = basic_residual(w, frame, tol);
  if (!basic.basic) throw Error(ErrorKind::NotBasic, "omega residual " + std::to_string(basic.residual));
  if (w.k < w.n) {
    const double dw = exterior_derivative(w).max_abs();
    if (dw > tol) throw Error(ErrorKind::NotClosed, "d omega residual " + std::to_string(dw));
  }
  DeltaResult r;
  r.form = wedge(exterior_derivative(alpha_form(s, p)), w);
  r.basic_residual = basic_residual(r.form, frame, tol).residual;
  r.closed_residual = r.form.k < r.form.n ? exterior_derivative(r.form).max_abs() : 0.0;
  return r;
}

ComplementedReport complemented_checks(const FlowScenario& s, const Point& p, Convention conv, double tol) {
  const int n = s.metric.dim();
  if (n != 3) throw Error(ErrorKind::HypothesisFailure, "complemented flows need n = 3");
  if (!s.w) throw Error(ErrorKind::HypothesisFailure, "no W field supplied");
  const MetricJet mj = metric_jet(s.metric, p);
  const JetVec xi = s.xi.at(p), w = s.w->at(p);
  const FlowN fn = build_N_flow(s, p);
  ComplementedReport r;
  r.bracket_WN = max_abs(values(bracket(w, fn.n)));
  if (r.bracket_WN > tol) throw Error(ErrorKind::HypothesisFailure, "condition 1: [W, N] != 0");
  if (inner(mj.g, w, w).value() <= 0.0) throw Error(ErrorKind::HypothesisFailure, "condition 2: g(W, W) <= 0");
  if (fn.pairing_residual > 1e-9) throw Error(ErrorKind::HypothesisFailure, "g(xi, N) != 1");
  const FormJet mu = FormJet::one_form(mj.g * xi);
  const FormJet eta = FormJet::one_form(mj.g * w);
  const FormJet dmu = exterior_derivative(mu, conv);
  r.d_mu = dmu.max_abs();
  r.d_eta = exterior_derivative(eta, conv).max_abs();
  r.mu_basic = basic_residual(mu, {xi}).residual;
  r.eta_basic = basic_residual(eta, {xi}).residual;
  r.h_coefficient = 2.0 * evaluate(dmu, std::vector<JetVec>{fn.n, w}, conv).value();
  r.h_bracket = inner(mj.g, xi, bracket(w, fn.n)).value();
  return r;
}

FoliationKind flow_kind(const FlowScenario& s) {
  const int n = s.metric.dim();
  return classify(1, n - 1, 1);
}

}  // namespace lightfol
