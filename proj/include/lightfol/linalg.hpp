#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lightfol/errors.hpp"
#include "lightfol/jet.hpp"

namespace lightfol {

using JetVec = std::vector<Jet>;

// Small dense row-major matrix of Jets.
class JetMat {
 public:
  JetMat() = default;
  JetMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}

  static JetMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Jet& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Jet& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  Eigen::MatrixXd values() const;
  JetMat transpose() const;
  JetVec row(int i) const;
  JetVec col(int j) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Jet> a_;
};

JetMat operator*(const JetMat& a, const JetMat& b);
JetVec operator*(const JetMat& a, const JetVec& v);

// Vector helpers.
JetVec operator+(const JetVec& a, const JetVec& b);
JetVec operator-(const JetVec& a, const JetVec& b);
JetVec operator*(const Jet& s, const JetVec& v);
JetVec constant_vector(const std::vector<double>& v);
std::vector<double> values(const JetVec& v);
int min_order(const JetVec& v);
double max_abs(const std::vector<double>& v);

// |det A| below 1e-12 * (max |entry|)^n, evaluated on values.
bool is_singular(const Eigen::MatrixXd& a, double rel = 1e-12);

Jet determinant(const JetMat& a);

// Inverse by Gaussian elimination with value-level partial pivoting; throws
// Error(kind) when the matrix is singular by is_singular.
JetMat inverse(const JetMat& a, ErrorKind kind = ErrorKind::SingularMetric);

// Solve A X = B (A square).
JetMat solve(const JetMat& a, const JetMat& b, ErrorKind kind = ErrorKind::SingularMetric);

// Numerical rank: singular values below rel * largest count as zero.
int numeric_rank(const Eigen::MatrixXd& a, double rel = 1e-8);

// Complete-pivoting choice of `rank` pivots, decided on values once and then
// reused at other points so that derived frames vary smoothly.
struct PivotPlan {
  std::vector<int> rows;
  std::vector<int> cols;
};

PivotPlan plan_pivots(const Eigen::MatrixXd& a, int rank);

// Pivot plan that keeps every row and uses the given pivot columns.
PivotPlan plan_with_columns(int rows, std::vector<int> cols);

// Kernel basis of A under a fixed plan: one vector per non-pivot column c
// (ascending), with entry 1 at c, 0 at the other free columns, and pivot
// entries solving the pivot block. Throws RankDrop if the pivot block is
// singular at this point.
std::vector<JetVec> nullspace(const JetMat& a, const PivotPlan& plan);

}  // namespace lightfol
