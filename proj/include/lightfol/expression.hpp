#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lightfol/jet.hpp"

namespace lightfol {

enum class UnaryOp { Neg, Sqrt, Sin, Cos, Exp, Log };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
  double value;
};
struct Coord {
  int index;  // 1-based
};
struct Unary {
  UnaryOp op;
  NodePtr arg;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs, rhs;
};

struct Node {
  std::variant<Literal, Coord, Unary, Binary> v;
};

// Immutable expression tree; copies share structure and are thread-safe.
class Expression {
 public:
  Expression();  // literal 0
  explicit Expression(NodePtr root);

  static Expression literal(double v);  // negative values become Neg(Lit)
  static Expression coord(int index);   // 1-based

  const Node& root() const { return *root_; }
  const NodePtr& node() const { return root_; }

  // Largest coordinate index referenced (0 if constant).
  int max_coord() const;
  bool is_constant() const { return max_coord() == 0; }

  std::string to_string() const;

  // Rename coordinates: x_i becomes x_{map(i)}.
  Expression remap(const std::function<int(int)>& map) const;

  friend bool operator==(const Expression& a, const Expression& b);

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

 private:
  NodePtr root_;
};

Expression unary(UnaryOp op, const Expression& a);
Expression binary(BinaryOp op, const Expression& a, const Expression& b);

Expression parse_expression(std::string_view text, int dim);

// Evaluate with coordinate x_i seeded as an independent variable (Jet of the
// requested order, dimension = point.size()).
Jet eval_jet(const Expression& e, std::span<const double> point, int order = kMaxOrder);

// Evaluate with arbitrary Jet inputs substituted for the coordinates; used for
// composition, e.g. pulling a metric back along an embedding.
Jet eval_composed(const Expression& e, std::span<const Jet> inputs);

double eval_value(const Expression& e, std::span<const double> point);

}  // namespace lightfol
