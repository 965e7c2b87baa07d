#include "lightfol/warped.hpp"

#include <Eigen/SVD>

namespace lightfol {

namespace {

std::vector<Jet> variables(std::span<const double> point) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> v;
  for (int k = 0; k < n; ++k) v.push_back(Jet::variable(n, k, point[k]));
  return v;
}

Eigen::MatrixXd projector(const std::vector<std::vector<double>>& frame, int n) {
  if (frame.empty()) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd a(n, static_cast<int>(frame.size()));
  for (std::size_t c = 0; c < frame.size(); ++c)
    for (int j = 0; j < n; ++j) a(j, static_cast<int>(c)) = frame[c][j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const int k = numeric_rank(a);
  const Eigen::MatrixXd u = svd.matrixU().leftCols(k);
  return u * u.transpose();
}

}  // namespace

double span_distance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  const int n = !a.empty() ? static_cast<int>(a[0].size()) : (!b.empty() ? static_cast<int>(b[0].size()) : 0);
  return (projector(a, n) - projector(b, n)).norm();
}

JetMat fibre_metric_at(const WarpedSpec& s, std::span<const double> point) {
  const int q = s.base.dim(), m = s.fibre.dim;
  if (static_cast<int>(point.size()) != q + m) throw Error(ErrorKind::Dimension, "point has wrong dimension");
  const std::vector<Jet> vars = variables(point);
  const std::span<const Jet> fib(vars.data() + q, static_cast<std::size_t>(m));
  JetMat gb(m, m);
  if (!s.fibre.ambient) {
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) gb(i, k) = eval_composed(s.fibre.entries[static_cast<std::size_t>(i * m + k)], fib);
    return gb;
  }
  const MetricField& h = *s.fibre.ambient;
  const int na = h.dim();
  if (static_cast<int>(s.fibre.embedding.size()) != na)
    throw Error(ErrorKind::Dimension, "embedding has " + std::to_string(s.fibre.embedding.size()) +
                                          " components for an ambient of dim " + std::to_string(na));
  std::vector<Jet> j;
  for (const auto& e : s.fibre.embedding) j.push_back(eval_composed(e, fib));
  JetMat jac(na, m), hj(na, na);
  for (int a = 0; a < na; ++a) {
    for (int i = 0; i < m; ++i) jac(a, i) = j[a].partial(q + i);
    for (int b = 0; b < na; ++b) hj(a, b) = eval_composed(h.entry(a, b), j);
  }
  return jac.transpose() * hj * jac;
}

JetMat assemble_warped_metric(const WarpedSpec& s, std::span<const double> point) {
  const int q = s.base.dim(), m = s.fibre.dim;
  const JetMat gb = fibre_metric_at(s, point);
  const std::vector<Jet> vars = variables(point);
  const std::span<const Jet> base(vars.data(), static_cast<std::size_t>(q));
  const Jet f = eval_composed(s.warp, base);
  if (!(f.value() > 0.0)) throw Error(ErrorKind::NonPositiveWarp, "warping function is " + std::to_string(f.value()));
  const Jet f2 = f * f;
  JetMat g(q + m, q + m);
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) g(i, k) = eval_composed(s.base.entry(i, k), base);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) g(q + i, q + k) = f2 * gb(i, k);
  return g;
}

FibreRadical fibre_radical_check(const WarpedSpec& s, std::span<const double> point, double tol) {
  const int q = s.base.dim(), m = s.fibre.dim, n = q + m;
  const JetMat g = assemble_warped_metric(s, point);
  std::vector<JetVec> frame;
  for (int i = 0; i < m; ++i) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[q + i] = 1.0;
    frame.push_back(constant_vector(e));
  }
  FibreRadical r;
  PivotPlan plan;
  const std::vector<JetVec> rad = radical_of_frame(g, frame, nullptr, &plan, &r.rank);
  if (r.rank == 0) throw Error(ErrorKind::NotLightlike, "fibre metric is nondegenerate");

  const Eigen::MatrixXd gb = fibre_metric_at(s, point).values();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gb, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<std::vector<double>> injected, found;
  for (int c = 0; c < m; ++c) {
    if (sv(c) > cut) continue;
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) v[q + i] = svd.matrixV()(i, c);
    injected.push_back(v);
  }
  r.injected_rank = static_cast<int>(injected.size());
  for (const auto& x : rad) found.push_back(values(x));
  if (r.rank != r.injected_rank || (s.rho && *s.rho != r.rank))
    throw Error(ErrorKind::RankMismatch, "radical rank " + std::to_string(r.rank) + ", fibre nullity " +
                                             std::to_string(r.injected_rank) +
                                             (s.rho ? ", declared " + std::to_string(*s.rho) : std::string()));
  r.span_residual = span_distance(found, injected);
  r.pass = r.span_residual <= tol;
  return r;
}

}  // namespace lightfol
