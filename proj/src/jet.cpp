#include "lightfol/jet.hpp"

#include <algorithm>
#include <cmath>

#include "lightfol/errors.hpp"

namespace lightfol {

namespace {

int common_dim(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw Error(ErrorKind::Dimension, "jets of dimension " + std::to_string(a) + " and " +
                                        std::to_string(b) + " combined");
}

int common_order(const Jet& a, const Jet& b) { return std::min(a.order(), b.order()); }

}  // namespace

Jet::Jet(double v) noexcept : value_(v) {}

Jet Jet::constant(double v, int dim) noexcept {
  Jet j(v);
  j.dim_ = static_cast<std::int8_t>(dim);
  return j;
}

Jet Jet::variable(int dim, int index, double value, int order) {
  if (dim < 1 || dim > kMaxDim || index < 0 || index >= dim)
    throw Error(ErrorKind::Dimension, "variable index out of range");
  Jet j(value);
  j.dim_ = static_cast<std::int8_t>(dim);
  j.order_ = static_cast<std::int8_t>(std::clamp(order, 0, kMaxOrder));
  if (order >= 1) j.grad_[index] = 1.0;
  return j;
}

double Jet::hess(int i, int j) const noexcept {
  if (i >= dim_ || j >= dim_) return 0.0;
  return hess_[tri(i, j)];
}

Jet Jet::partial(int i) const {
  if (dim_ == 0) return Jet(0.0);
  if (order_ < 1) throw Error(ErrorKind::InsufficientOrder, "partial of an order-0 jet");
  Jet r(grad_[i]);
  r.dim_ = dim_;
  r.order_ = static_cast<std::int8_t>(order_ - 1);
  if (order_ >= 2)
    for (int k = 0; k < dim_; ++k) r.grad_[k] = hess_[tri(i, k)];
  return r;
}

Jet Jet::truncated(int order) const noexcept {
  Jet r = *this;
  if (dim_ == 0 || order >= order_) return r;
  r.order_ = static_cast<std::int8_t>(std::max(order, 0));
  if (r.order_ < 2) r.hess_.fill(0.0);
  if (r.order_ < 1) r.grad_.fill(0.0);
  return r;
}

Jet Jet::widened(int dim) const {
  if (dim_ != 0 && dim_ != dim) throw Error(ErrorKind::Dimension, "cannot re-dimension a jet");
  Jet r = *this;
  r.dim_ = static_cast<std::int8_t>(dim);
  return r;
}

Jet Jet::operator-() const noexcept {
  Jet r = *this;
  r.value_ = -r.value_;
  for (int i = 0; i < dim_; ++i) r.grad_[i] = -r.grad_[i];
  for (int k = 0; k < dim_ * (dim_ + 1) / 2; ++k) r.hess_[k] = -r.hess_[k];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  const int n = common_dim(dim_, o.dim_);
  const int ord = common_order(*this, o);
  dim_ = static_cast<std::int8_t>(n);
  value_ += o.value_;
  for (int i = 0; i < o.dim_; ++i) grad_[i] += o.grad_[i];
  for (int k = 0; k < o.dim_ * (o.dim_ + 1) / 2; ++k) hess_[k] += o.hess_[k];
  *this = truncated(ord);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet& Jet::operator*=(const Jet& o) {
  const int n = common_dim(dim_, o.dim_);
  const int ord = common_order(*this, o);
  Jet r(value_ * o.value_);
  r.dim_ = static_cast<std::int8_t>(n);
  r.order_ = static_cast<std::int8_t>(ord);
  if (ord >= 1) {
    for (int i = 0; i < n; ++i) r.grad_[i] = grad(i) * o.value_ + value_ * o.grad(i);
  }
  if (ord >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        r.hess_[tri(i, j)] = hess(i, j) * o.value_ + value_ * o.hess(i, j) + grad(i) * o.grad(j) +
                             grad(j) * o.grad(i);
  }
  *this = r;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  const double v = o.value();
  if (v == 0.0) throw Error(ErrorKind::Domain, "division by zero");
  return *this *= o.apply(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet Jet::apply(double f0, double f1, double f2) const noexcept {
  Jet r(f0);
  r.dim_ = dim_;
  r.order_ = order_;
  if (order_ >= 1)
    for (int i = 0; i < dim_; ++i) r.grad_[i] = f1 * grad_[i];
  if (order_ >= 2)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j <= i; ++j)
        r.hess_[tri(i, j)] = f1 * hess_[tri(i, j)] + f2 * grad_[i] * grad_[j];
  return r;
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (v < 0.0 || (v == 0.0 && a.dim() > 0 && a.order() > 0))
    throw Error(ErrorKind::Domain, "sqrt of non-positive value");
  const double s = std::sqrt(v);
  if (v == 0.0) return a.apply(0.0, 0.0, 0.0);
  return a.apply(s, 0.5 / s, -0.25 / (s * v));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (v <= 0.0) throw Error(ErrorKind::Domain, "log of non-positive value");
  return a.apply(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet pow(const Jet& a, double e) {
  const double v = a.value();
  if (e == 0.0) return a.apply(1.0, 0.0, 0.0);
  const bool integral = std::nearbyint(e) == e && std::abs(e) < 1e9;
  if (!integral && v <= 0.0) throw Error(ErrorKind::Domain, "non-integer power of non-positive base");
  if (v == 0.0 && e < 0.0) throw Error(ErrorKind::Domain, "negative power of zero");
  const double f0 = std::pow(v, e);
  const double f1 = e == 1.0 ? 1.0 : e * std::pow(v, e - 1.0);
  const double f2 = (e == 1.0) ? 0.0 : (e == 2.0 ? 2.0 : e * (e - 1.0) * std::pow(v, e - 2.0));
  return a.apply(f0, f1, f2);
}

Jet abs(const Jet& a) { return a.value() < 0.0 ? -a : a; }

}  // namespace lightfol
