#include "lightfol/charforms.hpp"

#include <cmath>

namespace lightfol {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<FormJet> one_forms(const std::vector<JetVec>& covectors) {
  std::vector<FormJet> r;
  for (const auto& c : covectors) r.push_back(FormJet::one_form(c));
  return r;
}

std::vector<JetVec> constants(const std::vector<std::vector<double>>& vs) {
  std::vector<JetVec> r;
  for (const auto& v : vs) r.push_back(constant_vector(v));
  return r;
}

// θ = Σ μ^i + Σ ε_α η^α: vanishes on T(F) and equals 1 on every N_i and W_α.
// Used to inject a deliberately wrong κ.
JetVec offset_covector(const FrameBundle& b) {
  JetVec t(static_cast<std::size_t>(b.n), Jet(0.0));
  for (const auto& m : b.mu) t = t + m;
  for (std::size_t a = 0; a < b.eta.size(); ++a) t = t + Jet(static_cast<double>(b.eps_W[a])) * b.eta[a];
  return t;
}

}  // namespace

FormJet chi_form(const FrameBundle& b) {
  auto f = one_forms(b.lambda);
  auto s = one_forms(b.omega);
  f.insert(f.end(), s.begin(), s.end());
  return wedge_all(f, b.n);
}

FormJet nu_form(const FrameBundle& b) {
  auto f = one_forms(b.mu);
  auto s = one_forms(b.eta);
  f.insert(f.end(), s.begin(), s.end());
  return wedge_all(f, b.n);
}

std::vector<JetVec> tangent_tuple(const FrameBundle& b) {
  std::vector<JetVec> t = b.xi;
  t.insert(t.end(), b.X.begin(), b.X.end());
  return t;
}

std::vector<JetVec> transversal_tuple(const FrameBundle& b) {
  std::vector<JetVec> t = b.N;
  t.insert(t.end(), b.W.begin(), b.W.end());
  return t;
}

double chi_constant(const FrameBundle& b, Convention conv) {
  double c = 1.0;
  for (int e : b.eps_X) c *= e;
  return conv == Convention::FactorialAlternation ? c / factorial(b.m) : c;
}

double nu_constant(const FrameBundle& b, Convention conv) {
  double c = 1.0;
  for (int e : b.eps_W) c *= e;
  return conv == Convention::FactorialAlternation ? c / factorial(b.q) : c;
}

double chi_F(const FrameBundle& b, const std::vector<std::vector<double>>& vectors, Convention conv) {
  check_complete(b);
  return evaluate(chi_form(b), constants(vectors), conv).value();
}

double nu_F(const FrameBundle& b, const std::vector<std::vector<double>>& vectors, Convention conv) {
  check_complete(b);
  return evaluate(nu_form(b), constants(vectors), conv).value();
}

JetVec mean_curvature_screen(const FrameBundle& b) {
  JetVec h(static_cast<std::size_t>(b.n), Jet(0.0));
  for (std::size_t a = 0; a < b.X.size(); ++a) {
    JetVec v = covariant(b.metric, b.X[a], b.X[a]);
    for (std::size_t c = 0; c < b.X.size(); ++c)
      v = v - (static_cast<double>(b.eps_X[c]) * inner(b.metric.g, v, b.X[c])) * b.X[c];
    h = h + Jet(static_cast<double>(b.eps_X[a])) * v;
  }
  return h;
}

Jet kappa(const FrameBundle& b, const JetVec& z, KappaRoute route) {
  check_complete(b);
  const JetVec zt = tra_field(b, z);
  Jet k(0.0);
  for (int i = 0; i < b.r; ++i) k += apply_form(b.lambda[i], bracket(zt, b.xi[i]));
  if (route == KappaRoute::Definition) {
    for (std::size_t a = 0; a < b.X.size(); ++a)
      k += static_cast<double>(b.eps_X[a]) * apply_form(b.omega[a], bracket(zt, b.X[a]));
  } else {
    k += inner(b.metric.g, zt, mean_curvature_screen(b));
  }
  return k;
}

double kappa(const FrameBundle& b, const std::vector<double>& z, KappaRoute route) {
  return kappa(b, constant_vector(z), route).value();
}

FormJet kappa_form(const FrameBundle& b, KappaRoute route) {
  JetVec c(static_cast<std::size_t>(b.n));
  for (int j = 0; j < b.n; ++j) {
    std::vector<double> e(static_cast<std::size_t>(b.n), 0.0);
    e[j] = 1.0;
    c[j] = Jet(kappa(b, e, route));
  }
  return FormJet::one_form(c);
}

RummlerResult rummler_residual(const FrameBundle& b, const JetVec& z, Convention conv, double kappa_offset) {
  check_complete(b);
  const double tan = max_abs(values(tan_field(b, z)));
  if (tan > 1e-9 * std::max(1.0, max_abs(values(z))))
    throw Error(ErrorKind::NotTransversal, "Z has tangent part " + std::to_string(tan));
  const FormJet chi = chi_form(b);
  const auto tuple = tangent_tuple(b);
  RummlerResult r;
  r.kappa = kappa(b, z).value() + kappa_offset * apply_form(offset_covector(b), z).value();
  r.lie = evaluate(lie_form(z, chi), tuple, conv).value();
  r.chi = evaluate(chi, tuple, conv).value();
  r.residual = std::abs(r.lie + r.kappa * r.chi);
  return r;
}

FiltrationResult rummler_filtration_check(const FrameBundle& b, Convention conv, double kappa_offset, double tol,
                                          const double* coefficient) {
  if (conv != Convention::FactorialAlternation && coefficient == nullptr)
    throw Error(ErrorKind::ConventionMismatch, "the (m+1) prefactor assumes factorial alternation");
  check_complete(b);
  const double c = coefficient ? *coefficient : b.m + 1.0;
  FormJet k = kappa_form(b);
  if (kappa_offset != 0.0) k = k + Jet(kappa_offset) * FormJet::one_form(offset_covector(b));
  const FormJet chi = chi_form(b);
  const FormJet phi = exterior_derivative(chi, conv) + Jet(c) * wedge(k, chi);
  const auto tuple = tangent_tuple(b);
  FiltrationResult r;
  r.degree = filtration_degree(phi, tuple, tol);
  FormJet full = phi;
  for (const auto& x : tuple) full = interior(x, full, conv);
  r.defect = full.max_abs();
  r.pass = r.degree >= 2;
  return r;
}

GaugeDelta kappa_gauge_delta(const FrameBundle& b, const JetMat& f, const JetMat& a, const JetMat& bm,
                             const std::vector<double>& z) {
  const int r = b.r;
  std::vector<JetVec> xi2, v2;
  for (int i = 0; i < r; ++i) {
    JetVec x(static_cast<std::size_t>(b.n), Jet(0.0)), v(static_cast<std::size_t>(b.n), Jet(0.0));
    for (int j = 0; j < r; ++j) {
      x = x + f(i, j) * b.xi[j];
      v = v + a(i, j) * b.xi[j] + bm(i, j) * b.V[j];
    }
    xi2.push_back(x);
    v2.push_back(v);
  }
  const FrameBundle b2 = with_ltr(b, xi2, v2);
  GaugeDelta d;
  // Both κ's vanish on T(F) while trace(f^{-1} df) need not, so the law is
  // read on the transversal part of Z.
  const std::vector<double> zt = values(tra_field(b, constant_vector(z)));
  d.lhs = kappa(b2, zt) - kappa(b, zt);
  const JetMat fi = inverse(f, ErrorKind::SingularPairing);
  const JetVec zc = constant_vector(zt);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) d.rhs += fi(j, i).value() * derivative_along(zc, f(i, j)).value();
  return d;
}

DivergenceResult div_B(const FrameBundle& b, const JetVec& y, Convention conv, double tol) {
  check_complete(b);
  const auto tuple = tangent_tuple(b);
  for (const auto& x : tuple) {
    const double off = max_abs(values(tra_field(b, bracket(x, y))));
    if (off > tol) throw Error(ErrorKind::NotAutomorphism, "[X, Y] leaves T(F) by " + std::to_string(off));
  }
  const FormJet nu = nu_form(b);
  const FormJet lie = lie_form(y, nu);
  auto t1 = transversal_tuple(b);
  auto t2 = t1;
  for (auto& v : t2) {
    v = v + tuple.front();
    if (tuple.size() > 1) v = v + tuple.back();
  }
  DivergenceResult r;
  r.div = evaluate(lie, t1, conv).value() / evaluate(nu, t1, conv).value();
  const double d2 = evaluate(lie, t2, conv).value() / evaluate(nu, t2, conv).value();
  r.spread = std::abs(d2 - r.div);
  return r;
}

double divergence_identity_residual(const FrameBundle& b, const JetVec& y, Convention conv, DivergenceForm form,
                                    double kappa_offset) {
  if (form != DivergenceForm::Corrected && conv != Convention::FactorialAlternation)
    throw Error(ErrorKind::ConventionMismatch, "the (m+1) prefactor assumes factorial alternation");
  const double div = div_B(b, y, conv).div;
  const FormJet nu = nu_form(b);
  const FormJet chi = chi_form(b);
  std::vector<JetVec> frame = transversal_tuple(b);
  const auto tan = tangent_tuple(b);
  frame.insert(frame.end(), tan.begin(), tan.end());
  const double vol = evaluate(wedge(nu, chi), frame, conv).value();
  const double dterm =
      evaluate(exterior_derivative(wedge(interior(y, nu, conv), chi), conv), frame, conv).value();
  const double ky = kappa(b, y).value() + kappa_offset * apply_form(offset_covector(b), y).value();
  const double sign = (b.q % 2 == 0) ? 1.0 : -1.0;
  double rhs = 0.0;
  switch (form) {
    case DivergenceForm::Literal:
      rhs = dterm + sign * (b.m + 1.0) * ky * vol;
      break;
    case DivergenceForm::SignFlip:
      rhs = dterm - sign * (b.m + 1.0) * ky * vol;
      break;
    case DivergenceForm::Corrected: {
      const double cd = conv == Convention::FactorialAlternation ? static_cast<double>(b.q) / b.n : 1.0;
      rhs = cd * dterm + ky * vol;
      break;
    }
  }
  return std::abs(div * vol - rhs);
}

double tau_screen_relation(const FrameBundle& b, const std::vector<double>& z) {
  check_complete(b);
  const std::vector<double> zt = values(tra_field(b, constant_vector(z)));
  const JetVec zj = constant_vector(zt);
  const JetMat& g = b.metric.g;
  const double lhs = inner(g, zj, mean_curvature_screen(b)).value();
  JetVec tau(static_cast<std::size_t>(b.n), Jet(0.0)), nxx(static_cast<std::size_t>(b.n), Jet(0.0));
  for (std::size_t a = 0; a < b.X.size(); ++a) {
    const JetVec v = covariant(b.metric, b.X[a], b.X[a]);
    nxx = nxx + Jet(static_cast<double>(b.eps_X[a])) * v;
  }
  tau = tra_field(b, nxx);
  const double gtra = g_tra(b, zt, values(tau));
  const double second = inner(g, ltr_field(b, zj), nxx).value();
  return std::abs(lhs - gtra - second);
}

}  // namespace lightfol
