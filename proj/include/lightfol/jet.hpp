#pragma once

#include <array>
#include <cstdint>

namespace lightfol {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxOrder = 2;

// Truncated Taylor value in up to kMaxDim variables.
//
// order says how many derivative levels are trustworthy; arithmetic takes the
// minimum order of its operands. A Jet of dimension 0 is an exact constant:
// its partials are exact zeros and it combines with Jets of any dimension.
class Jet {
 public:
  Jet() noexcept : Jet(0.0) {}
  Jet(double v) noexcept;  // NOLINT(google-explicit-constructor): constants mix freely

  static Jet constant(double v, int dim = 0) noexcept;
  static Jet variable(int dim, int index, double value, int order = kMaxOrder);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return value_; }
  double grad(int i) const noexcept { return i < dim_ ? grad_[i] : 0.0; }
  double hess(int i, int j) const noexcept;

  // Partial derivative as a Jet one order lower. Exact constants stay exact.
  Jet partial(int i) const;
  // Same value and derivatives, with the order lowered (never raised).
  Jet truncated(int order) const noexcept;
  // Same function viewed in a chart of dimension dim >= this->dim().
  Jet widened(int dim) const;

  Jet operator-() const noexcept;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

  // Chain rule for a scalar function with value f0 and derivatives f1, f2 at value().
  Jet apply(double f0, double f1, double f2) const noexcept;

 private:
  static int tri(int i, int j) noexcept { return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i; }

  double value_ = 0.0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> hess_{};
  std::int8_t dim_ = 0;
  std::int8_t order_ = kMaxOrder;
};

Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double e);
Jet abs(const Jet& a);

}  // namespace lightfol
