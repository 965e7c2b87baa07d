#include "lightfol/transversal.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace lightfol {

namespace {

double euclid(const JetVec& v) {
  double s = 0.0;
  for (const Jet& x : v) s += x.value() * x.value();
  return std::sqrt(s);
}

JetVec scaled_sum(const std::vector<Jet>& c, const std::vector<JetVec>& vs, int n) {
  JetVec r(static_cast<std::size_t>(n), Jet(0.0));
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (int j = 0; j < n; ++j) r[j] += c[a] * vs[a][j];
  return r;
}

std::vector<double> tra_value(const FrameBundle& b, const std::vector<double>& v) {
  return values(tra_field(b, constant_vector(v)));
}

JetVec constant(const std::vector<double>& v) { return constant_vector(v); }

}  // namespace

std::vector<JetVec> build_ltr(const JetMat& g, const std::vector<JetVec>& xi, const std::vector<JetVec>& v) {
  const int r = static_cast<int>(xi.size());
  const int n = g.rows();
  if (static_cast<int>(v.size()) != r) throw Error(ErrorKind::Validation, "complement rank must equal r");
  JetMat gm(r, r), gvv(r, r);
  double xs = 0.0, vs = 0.0;
  for (int j = 0; j < r; ++j) {
    xs = std::max(xs, euclid(xi[j]));
    vs = std::max(vs, euclid(v[j]));
    for (int k = 0; k < r; ++k) {
      gm(j, k) = inner(g, xi[j], v[k]);
      gvv(j, k) = inner(g, v[j], v[k]);
    }
  }
  const double scale = xs * vs * std::max(g.values().cwiseAbs().maxCoeff(), 1e-300);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gm.values());
  if (r > 0 && svd.singularValues()(r - 1) <= 1e-9 * scale)
    throw Error(ErrorKind::SingularPairing, "G = [g(xi_j, V_k)] is singular");
  const JetMat bmat = inverse(gm, ErrorKind::SingularPairing).transpose();
  const JetMat amat = bmat * gvv * bmat.transpose();
  std::vector<JetVec> nfr;
  for (int i = 0; i < r; ++i) {
    std::vector<Jet> ca(static_cast<std::size_t>(r)), cb(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
      ca[k] = -0.5 * amat(i, k);
      cb[k] = bmat(i, k);
    }
    nfr.push_back(scaled_sum(ca, xi, n) + scaled_sum(cb, v, n));
  }
  return nfr;
}

JetVec project_complement(const JetMat& g, const JetVec& v, const std::vector<JetVec>& X,
                          const std::vector<int>& eps_X, const std::vector<JetVec>& W,
                          const std::vector<int>& eps_W) {
  JetVec u = v;
  for (std::size_t a = 0; a < X.size(); ++a) u = u - (static_cast<double>(eps_X[a]) * inner(g, v, X[a])) * X[a];
  for (std::size_t a = 0; a < W.size(); ++a) u = u - (static_cast<double>(eps_W[a]) * inner(g, v, W[a])) * W[a];
  return u;
}

void refresh_duals(FrameBundle& b) {
  auto lower = [&](const std::vector<JetVec>& vs) {
    std::vector<JetVec> r;
    for (const auto& v : vs) r.push_back(b.metric.g * v);
    return r;
  };
  b.lambda = lower(b.N);
  b.mu = lower(b.xi);
  b.omega = lower(b.X);
  b.eta = lower(b.W);
}

FrameBundle assemble_bundle(const FoliatedPoint& fp, const std::vector<JetVec>& complement) {
  FrameBundle b;
  b.p = fp.p;
  b.n = static_cast<int>(fp.p.size());
  b.m = fp.tangent.rank();
  b.q = b.n - b.m;
  b.r = fp.radical.rank();
  b.metric = fp.metric;
  b.tangent = fp.tangent.fields;
  b.xi = fp.radical.fields;
  b.X = fp.screen_tan.fields;
  b.eps_X = fp.screen_tan.signs;
  b.W = fp.screen_perp.fields;
  b.eps_W = fp.screen_perp.signs;
  if (static_cast<int>(complement.size()) != b.r)
    throw Error(ErrorKind::Validation, "complement must supply r = " + std::to_string(b.r) + " fields");
  for (const auto& v : complement) b.V.push_back(project_complement(b.metric.g, v, b.X, b.eps_X, b.W, b.eps_W));
  b.N = build_ltr(b.metric.g, b.xi, b.V);
  refresh_duals(b);
  return b;
}

FrameBundle with_ltr(const FrameBundle& b, std::vector<JetVec> xi, std::vector<JetVec> v) {
  FrameBundle c = b;
  c.xi = std::move(xi);
  c.V = std::move(v);
  c.N = build_ltr(c.metric.g, c.xi, c.V);
  refresh_duals(c);
  return c;
}

BundleEngine::BundleEngine(FoliationEngine foliation, std::vector<VectorField> complement)
    : fol_(std::move(foliation)), complement_(std::move(complement)) {}

FrameBundle BundleEngine::build(const Point& p) const {
  const FoliatedPoint fp = fol_.build(p);
  std::vector<JetVec> v;
  for (const auto& f : complement_) v.push_back(f.at(p));
  return assemble_bundle(fp, v);
}

double ltr_residual(const FrameBundle& b) {
  const JetMat& g = b.metric.g;
  double worst = 0.0;
  for (int i = 0; i < b.r; ++i) {
    for (int j = 0; j < b.r; ++j) {
      worst = std::max(worst, std::abs(inner(g, b.N[i], b.xi[j]).value() - (i == j ? 1.0 : 0.0)));
      worst = std::max(worst, std::abs(inner(g, b.N[i], b.N[j]).value()));
    }
    for (const auto& w : b.W) worst = std::max(worst, std::abs(inner(g, b.N[i], w).value()));
    for (const auto& x : b.X) worst = std::max(worst, std::abs(inner(g, b.N[i], x).value()));
  }
  return worst;
}

Jet apply_form(const JetVec& covector, const JetVec& v) {
  Jet s(0.0);
  for (std::size_t j = 0; j < v.size(); ++j) s += covector[j] * v[j];
  return s;
}

JetVec tan_field(const FrameBundle& b, const JetVec& v) {
  JetVec t(static_cast<std::size_t>(b.n), Jet(0.0));
  for (int i = 0; i < b.r; ++i) t = t + apply_form(b.lambda[i], v) * b.xi[i];
  for (std::size_t a = 0; a < b.X.size(); ++a)
    t = t + (static_cast<double>(b.eps_X[a]) * apply_form(b.omega[a], v)) * b.X[a];
  return t;
}

JetVec tra_field(const FrameBundle& b, const JetVec& v) { return v - tan_field(b, v); }

JetVec ltr_field(const FrameBundle& b, const JetVec& v) {
  JetVec t(static_cast<std::size_t>(b.n), Jet(0.0));
  for (int i = 0; i < b.r; ++i) t = t + apply_form(b.mu[i], v) * b.N[i];
  return t;
}

void check_complete(const FrameBundle& b) {
  std::vector<const std::vector<JetVec>*> parts = {&b.xi, &b.X, &b.W, &b.N};
  std::size_t count = 0;
  for (auto* p : parts) count += p->size();
  if (static_cast<int>(count) != b.n) throw Error(ErrorKind::IncompleteFrame, "frame count differs from n");
  Eigen::MatrixXd m(b.n, b.n);
  int row = 0;
  for (auto* p : parts)
    for (const auto& v : *p) {
      for (int j = 0; j < b.n; ++j) m(row, j) = v[j].value();
      ++row;
    }
  if (numeric_rank(m, 1e-10) < b.n) throw Error(ErrorKind::IncompleteFrame, "adapted frame does not span");
}

TransversalDecomposition decompose(const FrameBundle& b, const std::vector<double>& v) {
  check_complete(b);
  const JetVec c = constant(v);
  TransversalDecomposition d;
  d.tan_part = values(tan_field(b, c));
  d.tra_part.resize(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) d.tra_part[j] = v[j] - d.tan_part[j];
  d.ltr_part = values(ltr_field(b, c));
  JetVec s(static_cast<std::size_t>(b.n), Jet(0.0));
  for (std::size_t a = 0; a < b.W.size(); ++a)
    s = s + (static_cast<double>(b.eps_W[a]) * apply_form(b.eta[a], c)) * b.W[a];
  d.screen_perp_part = values(s);
  return d;
}

std::vector<double> class_coordinates(const FrameBundle& b, const std::vector<double>& v) {
  const JetVec c = constant(v);
  std::vector<double> k;
  for (std::size_t a = 0; a < b.W.size(); ++a) k.push_back(b.eps_W[a] * apply_form(b.eta[a], c).value());
  for (int i = 0; i < b.r; ++i) k.push_back(apply_form(b.mu[i], c).value());
  return k;
}

double g_tra(const FrameBundle& b, const std::vector<double>& s, const std::vector<double>& r) {
  return inner(b.metric.g, constant(tra_value(b, s)), constant(tra_value(b, r))).value();
}

CheckResult rad_Q_check(const FrameBundle& b, double tol) {
  std::vector<std::vector<double>> basis;
  for (const auto& w : b.W) basis.push_back(values(w));
  for (const auto& nv : b.N) basis.push_back(values(nv));
  const int k = static_cast<int>(basis.size());
  CheckResult res;
  for (int i = 0; i < b.r; ++i)
    for (int a = 0; a < k; ++a)
      res.residual = std::max(res.residual, std::abs(g_tra(b, values(b.N[i]), basis[a])));
  Eigen::MatrixXd gq(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) gq(a, c) = g_tra(b, basis[a], basis[c]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gq, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double big = std::max(1.0, sv.size() ? sv(0) : 0.0);
  int nullity = 0;
  for (int a = 0; a < k; ++a) {
    if (sv(a) > tol * big) continue;
    ++nullity;
    const Eigen::VectorXd v = svd.matrixV().col(a);
    for (std::size_t w = 0; w < b.W.size(); ++w) res.residual = std::max(res.residual, std::abs(v(static_cast<int>(w))));
  }
  if (nullity != b.r) res.residual = std::max(res.residual, 1.0);
  res.pass = res.residual <= tol;
  return res;
}

std::vector<double> nabla_Q(const FrameBundle& b, const std::vector<double>& x, const JetVec& y) {
  check_complete(b);
  const JetVec c = constant(x);
  const JetVec bott = bracket(tan_field(b, c), y);
  const JetVec lc = covariant(b.metric, tra_field(b, c), tra_field(b, y));
  const std::vector<double> sum = values(bott + lc);
  return tra_value(b, sum);
}

double torsion_Q(const FrameBundle& b, const JetVec& y, const JetVec& z) {
  auto nab = [&](const JetVec& u, const JetVec& w) {
    return values(bracket(tan_field(b, u), w) + covariant(b.metric, tra_field(b, u), tra_field(b, w)));
  };
  const std::vector<double> a = nab(y, z), c = nab(z, y), br = values(bracket(y, z));
  std::vector<double> t(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) t[j] = a[j] - c[j] - br[j];
  return max_abs(tra_value(b, t));
}

LtrTransform transform_ltr(const FrameBundle& b, const JetMat& f, const JetMat& a, const JetMat& bm) {
  const int r = b.r, n = b.n;
  std::vector<JetVec> xi2, v2;
  for (int i = 0; i < r; ++i) {
    std::vector<Jet> fi(static_cast<std::size_t>(r)), ai(static_cast<std::size_t>(r)), bi(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) {
      fi[j] = f(i, j);
      ai[j] = a(i, j);
      bi[j] = bm(i, j);
    }
    xi2.push_back(scaled_sum(fi, b.xi, n));
    v2.push_back(scaled_sum(ai, b.xi, n) + scaled_sum(bi, b.V, n));
  }
  LtrTransform out;
  out.rebuilt = build_ltr(b.metric.g, xi2, v2);

  JetMat gp(r, r);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) gp(j, k) = inner(b.metric.g, xi2[j], v2[k]);
  const JetMat gpi = inverse(gp, ErrorKind::SingularPairing);
  const JetMat fi = inverse(f, ErrorKind::SingularPairing);
  for (int j = 0; j < r; ++j) {
    std::vector<Jet> cn(static_cast<std::size_t>(r)), cx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      cn[i] = fi(i, j);
      Jet s(0.0);
      for (int k = 0; k < r; ++k) s += a(k, i) * gpi(k, j);
      for (int k = 0; k < r; ++k)
        for (int pp = 0; pp < r; ++pp)
          for (int l = 0; l < r; ++l) s -= a(k, pp) * gpi(k, l) * fi(pp, j) * f(l, i);
      cx[i] = 0.5 * s;
    }
    out.closed_form.push_back(scaled_sum(cn, b.N, n) + scaled_sum(cx, b.xi, n));
  }
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < n; ++k)
      out.residual = std::max(out.residual, std::abs(out.rebuilt[j][k].value() - out.closed_form[j][k].value()));
  return out;
}

}  // namespace lightfol
