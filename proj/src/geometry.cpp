#include "lightfol/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lightfol {

VectorField VectorField::parse(const std::vector<std::string>& components, int dim) {
  if (static_cast<int>(components.size()) != dim)
    throw Error(ErrorKind::Dimension, "vector field needs " + std::to_string(dim) + " components");
  std::vector<Expression> c;
  for (const auto& s : components) c.push_back(parse_expression(s, dim));
  return VectorField(std::move(c));
}

VectorField VectorField::constant(const std::vector<double>& components) {
  std::vector<Expression> c;
  for (double v : components) c.push_back(Expression::literal(v));
  return VectorField(std::move(c));
}

JetVec VectorField::at(std::span<const double> p, int order) const {
  if (static_cast<std::size_t>(dim()) != p.size())
    throw Error(ErrorKind::Dimension, "vector field and point dimension differ");
  JetVec v;
  v.reserve(c_.size());
  for (const auto& e : c_) v.push_back(eval_jet(e, p, order));
  return v;
}

MetricField::MetricField(int dim, int declared_index, std::vector<Expression> entries)
    : n_(dim), s_(declared_index), e_(std::move(entries)) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::Validation, "metric dimension out of range");
  if (static_cast<int>(e_.size()) != dim * dim)
    throw Error(ErrorKind::Validation, "metric needs n*n entries");
  if (declared_index < 0 || declared_index > dim)
    throw Error(ErrorKind::Validation, "declared index out of range");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (!(entry(i, j) == entry(j, i)))
        throw Error(ErrorKind::Validation, "metric entries not symmetric");
  for (const auto& e : e_)
    if (e.max_coord() > dim) throw DimensionError("x" + std::to_string(e.max_coord()), dim);
}

MetricField MetricField::diagonal(const std::vector<double>& diag) {
  const int n = static_cast<int>(diag.size());
  std::vector<Expression> e(static_cast<std::size_t>(n * n), Expression::literal(0.0));
  int s = 0;
  for (int i = 0; i < n; ++i) {
    e[static_cast<std::size_t>(i * n + i)] = Expression::literal(diag[i]);
    if (diag[i] < 0) ++s;
  }
  return MetricField(n, s, std::move(e));
}

MetricField MetricField::flat(int n, int s) {
  std::vector<double> d(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < s; ++i) d[i] = -1.0;
  return diagonal(d);
}

JetMat MetricField::at(std::span<const double> p, int order) const {
  if (static_cast<int>(p.size()) != n_) throw Error(ErrorKind::Dimension, "point dimension differs from metric");
  JetMat g(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) {
      g(i, j) = eval_jet(entry(i, j), p, order);
      g(j, i) = g(i, j);
    }
  return g;
}

double MetricJet::scale() const { return g.values().cwiseAbs().maxCoeff(); }

MetricJet metric_jet(const JetMat& g) {
  MetricJet mj;
  mj.n = g.rows();
  mj.g = g;
  mj.ginv = inverse(g, ErrorKind::SingularMetric);
  const int n = mj.n;
  // dg[l][i][j] = ∂_l g_ij
  std::vector<Jet> dg(static_cast<std::size_t>(n * n * n));
  auto d = [&](int l, int i, int j) -> Jet& { return dg[static_cast<std::size_t>((l * n + i) * n + j)]; };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(l, i, j) = g(i, j).partial(l);
  mj.gamma.assign(static_cast<std::size_t>(n * n * n), Jet(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // first-kind symbols [ij,l]
      std::vector<Jet> first(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) first[l] = 0.5 * (d(i, j, l) + d(j, i, l) - d(l, i, j));
      for (int k = 0; k < n; ++k) {
        Jet s(0.0);
        for (int l = 0; l < n; ++l) s += mj.ginv(k, l) * first[l];
        mj.gamma[static_cast<std::size_t>((k * n + i) * n + j)] = s;
        mj.gamma[static_cast<std::size_t>((k * n + j) * n + i)] = s;
      }
    }
  return mj;
}

MetricJet metric_jet(const MetricField& m, std::span<const double> p, int order) {
  return metric_jet(m.at(p, order));
}

int signature_index(const Eigen::MatrixXd& g, double rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto& ev = es.eigenvalues();
  const double big = ev.cwiseAbs().maxCoeff();
  int neg = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= rel * big || big == 0.0)
      throw Error(ErrorKind::SignatureMismatch, "metric degenerate at sample point");
    if (ev(i) < 0) ++neg;
  }
  return neg;
}

void check_signature(const MetricField& m, std::span<const double> p) {
  const int idx = signature_index(m.at(p, 0).values());
  if (idx != m.declared_index())
    throw Error(ErrorKind::SignatureMismatch, "index " + std::to_string(idx) + " but declared " +
                                                  std::to_string(m.declared_index()));
}

Jet inner(const JetMat& g, const JetVec& x, const JetVec& y) { return bilinear(g, x, y); }

Jet bilinear(const JetMat& b, const JetVec& x, const JetVec& y) {
  Jet s(0.0);
  const int n = b.rows();
  for (int i = 0; i < n; ++i) {
    if (x[i].value() == 0.0 && x[i].dim() == 0) continue;
    Jet row(0.0);
    for (int j = 0; j < n; ++j) row += b(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

Jet derivative_along(const JetVec& x, const Jet& f) {
  Jet s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * f.partial(static_cast<int>(i));
  return s;
}

JetVec derivative_along(const JetVec& x, const JetVec& y) {
  JetVec r(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) r[k] = derivative_along(x, y[k]);
  return r;
}

JetVec bracket(const JetVec& x, const JetVec& y) {
  return derivative_along(x, y) - derivative_along(y, x);
}

JetVec covariant(const MetricJet& mj, const JetVec& x, const JetVec& y) {
  JetVec r = derivative_along(x, y);
  const int n = mj.n;
  for (int k = 0; k < n; ++k) {
    Jet s(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += mj.christoffel(k, i, j) * x[i] * y[j];
    r[k] += s;
  }
  return r;
}

JetVec gradient(const MetricJet& mj, const Jet& f) {
  JetVec df(static_cast<std::size_t>(mj.n));
  for (int j = 0; j < mj.n; ++j) df[j] = f.partial(j);
  return mj.ginv * df;
}

Jet hessian(const MetricJet& mj, const Jet& f, const JetVec& x, const JetVec& y) {
  return derivative_along(x, derivative_along(y, f)) - derivative_along(covariant(mj, x, y), f);
}

Jet hessian_tensor(const MetricJet& mj, const Jet& f, int i, int j) {
  Jet h = f.partial(i).partial(j);
  for (int k = 0; k < mj.n; ++k) h -= mj.christoffel(k, i, j) * f.partial(k);
  return h;
}

Jet hessian_tensor(const MetricJet& mj, const Jet& f, const JetVec& x, const JetVec& y) {
  Jet s(0.0);
  for (int i = 0; i < mj.n; ++i)
    for (int j = 0; j < mj.n; ++j) s += x[i] * y[j] * hessian_tensor(mj, f, i, j);
  return s;
}

Jet laplace_beltrami(const MetricJet& mj, const Jet& f) {
  Jet s(0.0);
  for (int i = 0; i < mj.n; ++i)
    for (int j = 0; j < mj.n; ++j) s += mj.ginv(i, j) * hessian_tensor(mj, f, i, j);
  return s;
}

JetMat lie_derivative_metric(const MetricJet& mj, const JetVec& x) {
  const int n = mj.n;
  JetMat l(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Jet s = derivative_along(x, mj.g(i, j));
      for (int k = 0; k < n; ++k) s += x[k].partial(i) * mj.g(k, j) + x[k].partial(j) * mj.g(i, k);
      l(i, j) = s;
      l(j, i) = s;
    }
  return l;
}

JetMat lie_derivative_metric_christoffel(const MetricJet& mj, const JetVec& x) {
  const int n = mj.n;
  std::vector<JetVec> nabla;  // ∇_{∂_i} X
  for (int i = 0; i < n; ++i) {
    JetVec e(static_cast<std::size_t>(n), Jet(0.0));
    e[i] = Jet(1.0);
    nabla.push_back(covariant(mj, e, x));
  }
  JetMat l(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s(0.0);
      for (int k = 0; k < n; ++k) s += mj.g(k, j) * nabla[i][k] + mj.g(i, k) * nabla[j][k];
      l(i, j) = s;
    }
  return l;
}

JetMat metric_at(const MetricField& m, std::span<const double> p) { return m.at(p, 1); }

std::vector<double> christoffel(const MetricField& m, std::span<const double> p) {
  const MetricJet mj = metric_jet(m, p);
  std::vector<double> r;
  for (const Jet& j : mj.gamma) r.push_back(j.value());
  return r;
}

std::vector<double> covariant_derivative(const MetricField& m, const VectorField& x,
                                         const VectorField& y, std::span<const double> p) {
  return values(covariant(metric_jet(m, p), x.at(p), y.at(p)));
}

std::vector<double> bracket(const VectorField& x, const VectorField& y, std::span<const double> p) {
  return values(bracket(x.at(p), y.at(p)));
}

std::vector<double> gradient(const MetricField& m, const Expression& f, std::span<const double> p) {
  return values(gradient(metric_jet(m, p), eval_jet(f, p)));
}

double hessian(const MetricField& m, const Expression& f, const VectorField& x, const VectorField& y,
               std::span<const double> p) {
  return hessian(metric_jet(m, p), eval_jet(f, p), x.at(p), y.at(p)).value();
}

double laplace_beltrami(const MetricField& m, const Expression& f, std::span<const double> p) {
  return laplace_beltrami(metric_jet(m, p), eval_jet(f, p)).value();
}

Eigen::MatrixXd lie_derivative_metric(const MetricField& m, const VectorField& x,
                                      std::span<const double> p) {
  return lie_derivative_metric(metric_jet(m, p), x.at(p)).values();
}

KillingResult is_killing(const MetricField& m, const VectorField& x, const std::vector<Point>& samples,
                         double rel_tol) {
  KillingResult res;
  double worst_ratio = 0.0;
  for (const Point& p : samples) {
    const MetricJet mj = metric_jet(m, p);
    const double r = lie_derivative_metric(mj, x.at(p)).values().norm();
    res.max_residual = std::max(res.max_residual, r);
    worst_ratio = std::max(worst_ratio, r / std::max(mj.scale(), 1e-300));
  }
  res.killing = worst_ratio <= rel_tol;
  return res;
}

}  // namespace lightfol
