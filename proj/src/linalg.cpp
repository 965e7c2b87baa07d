#include "lightfol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lightfol {

JetMat JetMat::identity(int n) {
  JetMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Jet(1.0);
  return m;
}

Eigen::MatrixXd JetMat::values() const {
  Eigen::MatrixXd v(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v(i, j) = (*this)(i, j).value();
  return v;
}

JetMat JetMat::transpose() const {
  JetMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

JetVec JetMat::row(int i) const {
  JetVec r(static_cast<std::size_t>(cols_));
  for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

JetVec JetMat::col(int j) const {
  JetVec c(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

JetMat operator*(const JetMat& a, const JetMat& b) {
  JetMat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Jet s(0.0);
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

JetVec operator*(const JetMat& a, const JetVec& v) {
  JetVec r(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    Jet s(0.0);
    for (int k = 0; k < a.cols(); ++k) s += a(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

JetVec operator+(const JetVec& a, const JetVec& b) {
  JetVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

JetVec operator-(const JetVec& a, const JetVec& b) {
  JetVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

JetVec operator*(const Jet& s, const JetVec& v) {
  JetVec r(v);
  for (auto& x : r) x *= s;
  return r;
}

JetVec constant_vector(const std::vector<double>& v) { return JetVec(v.begin(), v.end()); }

std::vector<double> values(const JetVec& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
  return r;
}

int min_order(const JetVec& v) {
  int o = kMaxOrder;
  for (const Jet& j : v) o = std::min(o, j.order());
  return o;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool is_singular(const Eigen::MatrixXd& a, double rel) {
  if (a.rows() == 0) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return std::abs(a.determinant()) < rel * std::pow(scale, static_cast<double>(a.rows()));
}

namespace {

// In-place elimination of [A | B] with partial pivoting; returns the
// permutation sign and leaves A upper-triangular.
int eliminate(JetMat& a, JetMat& b, ErrorKind kind) {
  const int n = a.rows();
  if (is_singular(a.values())) throw Error(kind, "matrix singular at sample point");
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k).value()) > std::abs(a(p, k).value())) p = i;
    if (a(p, k).value() == 0.0) throw Error(kind, "zero pivot");
    if (p != k) {
      sign = -sign;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(p, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const Jet f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  return sign;
}

void back_substitute(const JetMat& a, JetMat& b) {
  const int n = a.rows();
  for (int k = n - 1; k >= 0; --k)
    for (int j = 0; j < b.cols(); ++j) {
      Jet s = b(k, j);
      for (int c = k + 1; c < n; ++c) s -= a(k, c) * b(c, j);
      b(k, j) = s / a(k, k);
    }
}

}  // namespace

Jet determinant(const JetMat& m) {
  const int n = m.rows();
  if (n == 0) return Jet(1.0);
  JetMat a = m;
  JetMat b(n, 0);
  Jet d(1.0);
  int sign = 1;
  // Partial pivoting without the singularity guard: a singular matrix simply has det 0.
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k).value()) > std::abs(a(p, k).value())) p = i;
    if (a(p, k).value() == 0.0) return Jet(0.0);
    if (p != k) {
      sign = -sign;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const Jet f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    d *= a(k, k);
  }
  return sign < 0 ? -d : d;
}

JetMat inverse(const JetMat& m, ErrorKind kind) {
  return solve(m, JetMat::identity(m.rows()), kind);
}

JetMat solve(const JetMat& m, const JetMat& rhs, ErrorKind kind) {
  JetMat a = m;
  JetMat b = rhs;
  eliminate(a, b, kind);
  back_substitute(a, b);
  return b;
}

int numeric_rank(const Eigen::MatrixXd& a, double rel) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) >= rel * s(0)) ++r;
  return r;
}

PivotPlan plan_pivots(const Eigen::MatrixXd& m, int rank) {
  Eigen::MatrixXd a = m;
  std::vector<int> rows(static_cast<std::size_t>(a.rows())), cols(static_cast<std::size_t>(a.cols()));
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  PivotPlan plan;
  for (int k = 0; k < rank; ++k) {
    int pr = k, pc = k;
    double best = -1.0;
    for (int i = k; i < a.rows(); ++i)
      for (int j = k; j < a.cols(); ++j)
        if (std::abs(a(i, j)) > best + 1e-14 * std::max(1.0, best)) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    a.row(k).swap(a.row(pr));
    a.col(k).swap(a.col(pc));
    std::swap(rows[k], rows[pr]);
    std::swap(cols[k], cols[pc]);
    for (int i = k + 1; i < a.rows(); ++i) {
      const double f = a(i, k) / a(k, k);
      a.row(i) -= f * a.row(k);
    }
    plan.rows.push_back(rows[k]);
    plan.cols.push_back(cols[k]);
  }
  return plan;
}

PivotPlan plan_with_columns(int rows, std::vector<int> cols) {
  PivotPlan plan;
  plan.rows.resize(static_cast<std::size_t>(rows));
  std::iota(plan.rows.begin(), plan.rows.end(), 0);
  plan.cols = std::move(cols);
  return plan;
}

std::vector<JetVec> nullspace(const JetMat& a, const PivotPlan& plan) {
  const int k = static_cast<int>(plan.cols.size());
  const int n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : plan.cols) is_pivot[c] = true;
  JetMat block(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) block(i, j) = a(plan.rows[i], plan.cols[j]);
  std::vector<int> free;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  JetMat rhs(k, static_cast<int>(free.size()));
  for (int i = 0; i < k; ++i)
    for (std::size_t f = 0; f < free.size(); ++f) rhs(i, static_cast<int>(f)) = -a(plan.rows[i], free[f]);
  JetMat coeff = k > 0 ? solve(block, rhs, ErrorKind::RankDrop) : rhs;
  std::vector<JetVec> basis;
  for (std::size_t f = 0; f < free.size(); ++f) {
    JetVec v(static_cast<std::size_t>(n), Jet(0.0));
    v[free[f]] = Jet(1.0);
    for (int i = 0; i < k; ++i) v[plan.cols[i]] = coeff(i, static_cast<int>(f));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace lightfol
