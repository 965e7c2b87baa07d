#pragma once

#include <functional>
#include <map>
#include <string_view>
#include <vector>

#include "lightfol/geometry.hpp"

namespace lightfol {

// UnitShuffle: (dx^1 ∧ ... ∧ dx^k)(∂_1, ..., ∂_k) = 1, interior is the
// determinant contraction, d is the coordinate formula.
// FactorialAlternation: wedge is Alt(α ⊗ β) with no prefactor, so the same
// component array evaluates to 1/k! on the coordinate frame; interior is plain
// first-slot contraction and d is the intrinsic (Palais) derivative. Both
// modes satisfy L_X = i_X d + d i_X.
enum class Convention { UnitShuffle, FactorialAlternation };

std::string_view convention_name(Convention c);
Convention parse_convention(std::string_view s);

// Increasing index tuples of size k from {0..n-1}, lexicographic.
const std::vector<std::vector<int>>& subsets(int n, int k);
int subset_index(int n, const std::vector<int>& sorted);

// Components ω_I on lexicographic k-subsets, Jet valued.
struct FormJet {
  int n = 0;
  int k = 0;
  std::vector<Jet> c;

  static FormJet zero(int n, int k);
  static FormJet scalar(int n, const Jet& f);
  static FormJet one_form(const JetVec& covector);

  Jet& operator[](const std::vector<int>& sorted) { return c[static_cast<std::size_t>(subset_index(n, sorted))]; }
  const Jet& operator[](const std::vector<int>& sorted) const {
    return c[static_cast<std::size_t>(subset_index(n, sorted))];
  }
  double max_abs() const;
};

FormJet operator+(const FormJet& a, const FormJet& b);
FormJet operator-(const FormJet& a, const FormJet& b);
FormJet operator*(const Jet& s, const FormJet& a);

FormJet wedge(const FormJet& a, const FormJet& b);
FormJet wedge_all(const std::vector<FormJet>& factors, int n);
FormJet exterior_derivative(const FormJet& a, Convention conv = Convention::UnitShuffle);
FormJet interior(const JetVec& x, const FormJet& a, Convention conv = Convention::UnitShuffle);
// Cartan's formula; the result is convention independent.
FormJet lie_form(const JetVec& x, const FormJet& a);

Jet evaluate(const FormJet& a, const std::vector<JetVec>& args, Convention conv = Convention::UnitShuffle);
double evaluate(const FormJet& a, const std::vector<std::vector<double>>& args,
                Convention conv = Convention::UnitShuffle);

// L_X ω (Y_1..Y_k) = X(ω(Y..)) − Σ ω(.., [X, Y_j], ..); independent of Cartan.
Jet lie_form_bracket(const JetVec& x, const FormJet& a, const std::vector<JetVec>& args,
                     Convention conv = Convention::UnitShuffle);

// Closed-form components given as expressions on increasing index tuples.
class FormField {
 public:
  FormField(int n, int k) : n_(n), k_(k) {}
  void set(std::vector<int> sorted, Expression e);
  int dim() const { return n_; }
  int degree() const { return k_; }
  FormJet at(std::span<const double> p, int order = kMaxOrder) const;

 private:
  int n_, k_;
  std::map<std::vector<int>, Expression> comps_;
};

struct BasicResult {
  bool basic = false;
  double residual = 0.0;
};

// max over frame fields X of |X ⌋ ω| and |X ⌋ dω|.
BasicResult basic_residual(const FormJet& a, const std::vector<JetVec>& frame, double tol = 1e-8);

using FrameProvider = std::function<std::vector<JetVec>(const Point&)>;
BasicResult is_basic(const FormField& a, const FrameProvider& frame, const std::vector<Point>& samples,
                     double tol = 1e-8);

// Largest r with ω ∈ F^r Ω^k, i.e. every (k − r + 1)-fold contraction by
// frame vectors vanishes. A vanishing form reports k + 1.
int filtration_degree(const FormJet& a, const std::vector<JetVec>& frame, double tol = 1e-8);

}  // namespace lightfol
