#include "lightfol/exterior.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>

namespace lightfol {

std::string_view convention_name(Convention c) {
  return c == Convention::UnitShuffle ? "unit-shuffle" : "factorial-alternation";
}

Convention parse_convention(std::string_view s) {
  if (s == "unit-shuffle" || s == "unit") return Convention::UnitShuffle;
  if (s == "factorial-alternation" || s == "factorial") return Convention::FactorialAlternation;
  throw Error(ErrorKind::Validation, "unknown convention '" + std::string(s) + "'");
}

namespace {

struct SubsetTable {
  std::vector<std::vector<int>> list;
  std::array<int, 1 << kMaxDim> rank{};
};

const SubsetTable& table(int n, int k) {
  static std::array<std::array<SubsetTable, kMaxDim + 2>, kMaxDim + 1> tables;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int nn = 0; nn <= kMaxDim; ++nn)
      for (unsigned mask = 0; mask < (1u << nn); ++mask) {
        const int kk = std::popcount(mask);
        std::vector<int> s;
        for (int i = 0; i < nn; ++i)
          if (mask & (1u << i)) s.push_back(i);
        tables[nn][kk].list.push_back(s);
      }
    for (int nn = 0; nn <= kMaxDim; ++nn)
      for (int kk = 0; kk <= nn; ++kk) {
        auto& t = tables[nn][kk];
        std::sort(t.list.begin(), t.list.end());
        for (std::size_t i = 0; i < t.list.size(); ++i) {
          unsigned mask = 0;
          for (int j : t.list[i]) mask |= 1u << j;
          t.rank[mask] = static_cast<int>(i);
        }
      }
  });
  if (n < 0 || n > kMaxDim || k < 0 || k > n + 1) throw Error(ErrorKind::Dimension, "form degree out of range");
  return tables[n][k];
}

unsigned mask_of(const std::vector<int>& s) {
  unsigned m = 0;
  for (int i : s) m |= 1u << i;
  return m;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Laplace expansion keeps derivative information even where the value of the
// determinant is exactly zero, which elimination with a zero pivot would drop.
Jet laplace_det(const std::vector<const JetVec*>& cols, const std::vector<int>& rows, unsigned used, int c) {
  const int k = static_cast<int>(rows.size());
  if (c == k) return Jet(1.0);
  Jet s(0.0);
  int sign = 0;
  for (int r = 0; r < k; ++r) {
    if (used & (1u << r)) continue;
    const Jet& e = (*cols[static_cast<std::size_t>(c)])[static_cast<std::size_t>(rows[r])];
    if (!(e.value() == 0.0 && e.dim() == 0)) {
      const Jet t = e * laplace_det(cols, rows, used | (1u << r), c + 1);
      if (sign & 1) s -= t;
      else s += t;
    }
    ++sign;
  }
  return s;
}

void same_shape(const FormJet& a, const FormJet& b) {
  if (a.n != b.n || a.k != b.k) throw Error(ErrorKind::Dimension, "form shape mismatch");
}

}  // namespace

const std::vector<std::vector<int>>& subsets(int n, int k) { return table(n, k).list; }

int subset_index(int n, const std::vector<int>& sorted) {
  return table(n, static_cast<int>(sorted.size())).rank[mask_of(sorted)];
}

FormJet FormJet::zero(int n, int k) {
  if (k > n) throw Error(ErrorKind::DegreeOverflow, "degree " + std::to_string(k) + " exceeds n");
  if (k < 0) throw Error(ErrorKind::DegreeUnderflow, "negative degree");
  FormJet f;
  f.n = n;
  f.k = k;
  f.c.assign(subsets(n, k).size(), Jet(0.0));
  return f;
}

FormJet FormJet::scalar(int n, const Jet& v) {
  FormJet f = zero(n, 0);
  f.c[0] = v;
  return f;
}

FormJet FormJet::one_form(const JetVec& covector) {
  FormJet f = zero(static_cast<int>(covector.size()), 1);
  for (std::size_t i = 0; i < covector.size(); ++i) f.c[i] = covector[i];
  return f;
}

double FormJet::max_abs() const {
  double m = 0.0;
  for (const Jet& x : c) m = std::max(m, std::abs(x.value()));
  return m;
}

FormJet operator+(const FormJet& a, const FormJet& b) {
  same_shape(a, b);
  FormJet r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

FormJet operator-(const FormJet& a, const FormJet& b) {
  same_shape(a, b);
  FormJet r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

FormJet operator*(const Jet& s, const FormJet& a) {
  FormJet r = a;
  for (Jet& x : r.c) x *= s;
  return r;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
  if (a.n != b.n) throw Error(ErrorKind::Dimension, "wedge of forms on different charts");
  if (a.k + b.k > a.n) throw Error(ErrorKind::DegreeOverflow, "wedge degree exceeds n");
  const int n = a.n;
  FormJet r = FormJet::zero(n, a.k + b.k);
  const auto& sa = subsets(n, a.k);
  const auto& sb = subsets(n, b.k);
  const auto& tr = table(n, a.k + b.k);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const unsigned mi = mask_of(sa[i]);
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const unsigned mj = mask_of(sb[j]);
      if (mi & mj) continue;
      // sign of the shuffle: count pairs (p in I, q in J) with p > q
      int inv = 0;
      for (int p : sa[i])
        for (int q : sb[j]) inv += p > q;
      Jet t = a.c[i] * b.c[j];
      if (inv & 1) t = -t;
      r.c[static_cast<std::size_t>(tr.rank[mi | mj])] += t;
    }
  }
  return r;
}

FormJet wedge_all(const std::vector<FormJet>& factors, int n) {
  FormJet r = FormJet::scalar(n, Jet(1.0));
  for (const auto& f : factors) r = wedge(r, f);
  return r;
}

FormJet exterior_derivative(const FormJet& a, Convention conv) {
  if (a.k + 1 > a.n) throw Error(ErrorKind::DegreeOverflow, "d of a top-degree form");
  const int n = a.n;
  FormJet r = FormJet::zero(n, a.k + 1);
  const auto& out = subsets(n, a.k + 1);
  const auto& in = table(n, a.k);
  const double scale = conv == Convention::FactorialAlternation ? a.k + 1.0 : 1.0;
  for (std::size_t K = 0; K < out.size(); ++K) {
    const unsigned mk = mask_of(out[K]);
    Jet s(0.0);
    for (int j = 0; j <= a.k; ++j) {
      const int i = out[K][j];
      const Jet term = a.c[static_cast<std::size_t>(in.rank[mk & ~(1u << i)])].partial(i);
      if (j & 1) s -= term;
      else s += term;
    }
    r.c[K] = scale * s;
  }
  return r;
}

FormJet interior(const JetVec& x, const FormJet& a, Convention conv) {
  if (a.k < 1) throw Error(ErrorKind::DegreeUnderflow, "interior product of a 0-form");
  const int n = a.n;
  FormJet r = FormJet::zero(n, a.k - 1);
  const auto& out = subsets(n, a.k - 1);
  const auto& in = table(n, a.k);
  const double scale = conv == Convention::FactorialAlternation ? 1.0 / a.k : 1.0;
  for (std::size_t J = 0; J < out.size(); ++J) {
    const unsigned mj = mask_of(out[J]);
    Jet s(0.0);
    for (int i = 0; i < n; ++i) {
      if (mj & (1u << i)) continue;
      const int pos = std::popcount(mj & ((1u << i) - 1u));
      const Jet term = x[i] * a.c[static_cast<std::size_t>(in.rank[mj | (1u << i)])];
      if (pos & 1) s -= term;
      else s += term;
    }
    r.c[J] = scale * s;
  }
  return r;
}

FormJet lie_form(const JetVec& x, const FormJet& a) {
  FormJet r = FormJet::zero(a.n, a.k);
  if (a.k < a.n) r = r + interior(x, exterior_derivative(a));
  if (a.k >= 1) r = r + exterior_derivative(interior(x, a));
  return r;
}

Jet evaluate(const FormJet& a, const std::vector<JetVec>& args, Convention conv) {
  if (static_cast<int>(args.size()) != a.k) throw Error(ErrorKind::Dimension, "argument count differs from degree");
  if (a.k == 0) return a.c[0];
  const auto& ss = subsets(a.n, a.k);
  Jet s(0.0);
  std::vector<const JetVec*> cols;
  for (const auto& v : args) cols.push_back(&v);
  for (std::size_t I = 0; I < ss.size(); ++I) {
    if (a.c[I].value() == 0.0 && a.c[I].dim() == 0) continue;
    s += a.c[I] * laplace_det(cols, ss[I], 0u, 0);
  }
  if (conv == Convention::FactorialAlternation) s = (1.0 / factorial(a.k)) * s;
  return s;
}

double evaluate(const FormJet& a, const std::vector<std::vector<double>>& args, Convention conv) {
  std::vector<JetVec> j;
  for (const auto& v : args) j.push_back(constant_vector(v));
  return evaluate(a, j, conv).value();
}

Jet lie_form_bracket(const JetVec& x, const FormJet& a, const std::vector<JetVec>& args, Convention conv) {
  Jet s = derivative_along(x, evaluate(a, args, conv));
  for (std::size_t j = 0; j < args.size(); ++j) {
    std::vector<JetVec> b = args;
    b[j] = bracket(x, args[j]);
    s -= evaluate(a, b, conv);
  }
  return s;
}

void FormField::set(std::vector<int> sorted, Expression e) {
  if (static_cast<int>(sorted.size()) != k_) throw Error(ErrorKind::Dimension, "component index has wrong length");
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= n_ || (i > 0 && sorted[i] <= sorted[i - 1]))
      throw Error(ErrorKind::Validation, "component indices must be strictly increasing and in range");
  }
  comps_[std::move(sorted)] = std::move(e);
}

FormJet FormField::at(std::span<const double> p, int order) const {
  FormJet f = FormJet::zero(n_, k_);
  for (const auto& [idx, e] : comps_) f[idx] = eval_jet(e, p, order);
  return f;
}

BasicResult basic_residual(const FormJet& a, const std::vector<JetVec>& frame, double tol) {
  BasicResult r;
  const bool has_d = a.k < a.n;
  const FormJet da = has_d ? exterior_derivative(a) : FormJet{};
  for (const auto& x : frame) {
    if (a.k >= 1) r.residual = std::max(r.residual, interior(x, a).max_abs());
    if (has_d) r.residual = std::max(r.residual, interior(x, da).max_abs());
  }
  r.basic = r.residual <= tol;
  return r;
}

BasicResult is_basic(const FormField& a, const FrameProvider& frame, const std::vector<Point>& samples,
                     double tol) {
  BasicResult r;
  r.basic = true;
  for (const auto& p : samples) {
    const BasicResult b = basic_residual(a.at(p), frame(p), tol);
    r.residual = std::max(r.residual, b.residual);
  }
  r.basic = r.residual <= tol;
  return r;
}

int filtration_degree(const FormJet& a, const std::vector<JetVec>& frame, double tol) {
  const int m = static_cast<int>(frame.size());
  if (a.max_abs() <= tol) return a.k + 1;
  for (int j = 1; j <= a.k; ++j) {
    bool vanish = true;
    if (j <= m) {
      for (const auto& sub : subsets(m, j)) {
        FormJet c = a;
        for (int idx : sub) c = interior(frame[static_cast<std::size_t>(idx)], c);
        if (c.max_abs() > tol) {
          vanish = false;
          break;
        }
      }
    }
    if (vanish) return a.k - j + 1;
  }
  return 0;
}

}  // namespace lightfol
