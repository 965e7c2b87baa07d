#pragma once

#include <span>
#include <string>
#include <vector>

#include "lightfol/expression.hpp"
#include "lightfol/linalg.hpp"

namespace lightfol {

using Point = std::vector<double>;

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Expression> components) : c_(std::move(components)) {}
  static VectorField parse(const std::vector<std::string>& components, int dim);
  static VectorField constant(const std::vector<double>& components);

  int dim() const { return static_cast<int>(c_.size()); }
  const Expression& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<Expression>& components() const { return c_; }
  JetVec at(std::span<const double> p, int order = kMaxOrder) const;

 private:
  std::vector<Expression> c_;
};

class MetricField {
 public:
  // entries: n*n row-major; must be structurally symmetric.
  MetricField(int dim, int declared_index, std::vector<Expression> entries);
  static MetricField diagonal(const std::vector<double>& diag);
  static MetricField flat(int n, int s);  // diag(-1 x s, +1 x (n-s))

  int dim() const { return n_; }
  int declared_index() const { return s_; }
  const Expression& entry(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  JetMat at(std::span<const double> p, int order = kMaxOrder) const;

 private:
  int n_;
  int s_;
  std::vector<Expression> e_;
};

// The metric and its Levi-Civita data at one point, all as Jets.
struct MetricJet {
  int n = 0;
  JetMat g;
  JetMat ginv;
  std::vector<Jet> gamma;  // Γ^k_ij at [(k*n + i)*n + j]

  const Jet& christoffel(int k, int i, int j) const {
    return gamma[static_cast<std::size_t>((k * n + i) * n + j)];
  }
  double scale() const;  // max |g_ij|
};

MetricJet metric_jet(const JetMat& g);
MetricJet metric_jet(const MetricField& m, std::span<const double> p, int order = kMaxOrder);

// Count of negative eigenvalues; throws SignatureMismatch if an eigenvalue is
// within rel * max|eigenvalue| of zero.
int signature_index(const Eigen::MatrixXd& g, double rel = 1e-8);
void check_signature(const MetricField& m, std::span<const double> p);

// Pointwise primitives on Jet-valued fields.
Jet inner(const JetMat& g, const JetVec& x, const JetVec& y);
Jet derivative_along(const JetVec& x, const Jet& f);             // X(f)
JetVec derivative_along(const JetVec& x, const JetVec& y);       // X(Y^k)
JetVec bracket(const JetVec& x, const JetVec& y);
JetVec covariant(const MetricJet& mj, const JetVec& x, const JetVec& y);
JetVec gradient(const MetricJet& mj, const Jet& f);
Jet hessian(const MetricJet& mj, const Jet& f, const JetVec& x, const JetVec& y);
Jet hessian_tensor(const MetricJet& mj, const Jet& f, int i, int j);
Jet hessian_tensor(const MetricJet& mj, const Jet& f, const JetVec& x, const JetVec& y);
Jet laplace_beltrami(const MetricJet& mj, const Jet& f);
JetMat lie_derivative_metric(const MetricJet& mj, const JetVec& x);
JetMat lie_derivative_metric_christoffel(const MetricJet& mj, const JetVec& x);
Jet bilinear(const JetMat& b, const JetVec& x, const JetVec& y);

// Field-level interface.
JetMat metric_at(const MetricField& m, std::span<const double> p);
std::vector<double> christoffel(const MetricField& m, std::span<const double> p);
std::vector<double> covariant_derivative(const MetricField& m, const VectorField& x,
                                         const VectorField& y, std::span<const double> p);
std::vector<double> bracket(const VectorField& x, const VectorField& y, std::span<const double> p);
std::vector<double> gradient(const MetricField& m, const Expression& f, std::span<const double> p);
double hessian(const MetricField& m, const Expression& f, const VectorField& x, const VectorField& y,
               std::span<const double> p);
double laplace_beltrami(const MetricField& m, const Expression& f, std::span<const double> p);
Eigen::MatrixXd lie_derivative_metric(const MetricField& m, const VectorField& x,
                                      std::span<const double> p);

struct KillingResult {
  bool killing = false;
  double max_residual = 0.0;
};
KillingResult is_killing(const MetricField& m, const VectorField& x,
                         const std::vector<Point>& samples, double rel_tol = 1e-9);

}  // namespace lightfol
