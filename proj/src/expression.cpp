#include "lightfol/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "lightfol/errors.hpp"

namespace lightfol {

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

int max_coord_of(const Node& n) {
  struct V {
    int operator()(const Literal&) const { return 0; }
    int operator()(const Coord& c) const { return c.index; }
    int operator()(const Unary& u) const { return max_coord_of(*u.arg); }
    int operator()(const Binary& b) const {
      return std::max(max_coord_of(*b.lhs), max_coord_of(*b.rhs));
    }
  };
  return std::visit(V{}, n.v);
}

void print(const Node& n, std::string& out) {
  if (const auto* lit = std::get_if<Literal>(&n.v)) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, lit->value);
    out.append(buf, res.ptr);
  } else if (const auto* c = std::get_if<Coord>(&n.v)) {
    out += 'x';
    out += std::to_string(c->index);
  } else if (const auto* u = std::get_if<Unary>(&n.v)) {
    if (u->op == UnaryOp::Neg) {
      out += '-';
      print(*u->arg, out);
    } else {
      out += unary_name(u->op);
      out += '(';
      print(*u->arg, out);
      out += ')';
    }
  } else {
    const auto& b = std::get<Binary>(n.v);
    out += '(';
    print(*b.lhs, out);
    out += binary_symbol(b.op);
    print(*b.rhs, out);
    out += ')';
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  if (const auto* l = std::get_if<Literal>(&a.v)) return l->value == std::get<Literal>(b.v).value;
  if (const auto* c = std::get_if<Coord>(&a.v)) return c->index == std::get<Coord>(b.v).index;
  if (const auto* u = std::get_if<Unary>(&a.v)) {
    const auto& ub = std::get<Unary>(b.v);
    return u->op == ub.op && equal(*u->arg, *ub.arg);
  }
  const auto& ba = std::get<Binary>(a.v);
  const auto& bb = std::get<Binary>(b.v);
  return ba.op == bb.op && equal(*ba.lhs, *bb.lhs) && equal(*ba.rhs, *bb.rhs);
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "expression");
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError(pos_, "end of input");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make({Binary{BinaryOp::Add, lhs, term()}});
      else if (accept('-')) lhs = make({Binary{BinaryOp::Sub, lhs, term()}});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = make({Binary{BinaryOp::Mul, lhs, factor()}});
      else if (accept('/')) lhs = make({Binary{BinaryOp::Div, lhs, factor()}});
      else return lhs;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (accept('^')) {
      skip();
      const std::size_t at = pos_;
      NodePtr e = base();
      if (max_coord_of(*e) != 0) throw SyntaxError(at, "constant exponent");
      return make({Binary{BinaryOp::Pow, b, e}});
    }
    return b;
  }

  NodePtr base() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "operand");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return make({Unary{UnaryOp::Neg, base()}});
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) throw SyntaxError(pos_, "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw SyntaxError(pos_, "number, coordinate, function or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++k;
      return k;
    };
    std::size_t count = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw SyntaxError(start, "digits");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw SyntaxError(start, "number");
    return make({Literal{v}});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    if (id.size() > 1 && id[0] == 'x' &&
        std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const long idx = std::strtol(std::string(id.substr(1)).c_str(), nullptr, 10);
      if (idx < 1) throw SyntaxError(start, "coordinate index >= 1");
      if (idx > dim_) throw DimensionError(std::string(id), dim_);
      return make({Coord{static_cast<int>(idx)}});
    }
    static constexpr std::pair<std::string_view, UnaryOp> funcs[] = {
        {"sqrt", UnaryOp::Sqrt}, {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos},
        {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log}};
    for (const auto& [name, op] : funcs) {
      if (id == name) {
        if (!accept('(')) throw SyntaxError(pos_, "'(' after " + std::string(name));
        NodePtr arg = expr();
        if (!accept(')')) throw SyntaxError(pos_, "')'");
        return make({Unary{op, arg}});
      }
    }
    throw SyntaxError(start, "coordinate x<k> or one of sqrt, sin, cos, exp, log");
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

template <class Seed>
Jet evaluate(const Node& n, const Seed& seed, const std::function<std::vector<double>()>& where) {
  if (const auto* lit = std::get_if<Literal>(&n.v)) return Jet(lit->value);
  if (const auto* c = std::get_if<Coord>(&n.v)) return seed(c->index - 1);
  auto fail = [&](const Node& at) {
    std::string s;
    print(at, s);
    throw DomainError(s, where());
  };
  if (const auto* u = std::get_if<Unary>(&n.v)) {
    const Jet a = evaluate(*u->arg, seed, where);
    switch (u->op) {
      case UnaryOp::Neg: return -a;
      case UnaryOp::Sqrt:
        if (a.value() < 0.0 || (a.value() == 0.0 && a.dim() > 0 && a.order() > 0)) fail(n);
        return sqrt(a);
      case UnaryOp::Sin: return sin(a);
      case UnaryOp::Cos: return cos(a);
      case UnaryOp::Exp: return exp(a);
      case UnaryOp::Log:
        if (a.value() <= 0.0) fail(n);
        return log(a);
    }
  }
  const auto& b = std::get<Binary>(n.v);
  const Jet l = evaluate(*b.lhs, seed, where);
  const Jet r = evaluate(*b.rhs, seed, where);
  switch (b.op) {
    case BinaryOp::Add: return l + r;
    case BinaryOp::Sub: return l - r;
    case BinaryOp::Mul: return l * r;
    case BinaryOp::Div:
      if (r.value() == 0.0) fail(n);
      return l / r;
    case BinaryOp::Pow: {
      const double e = r.value();
      const bool integral = std::nearbyint(e) == e;
      if ((!integral && l.value() <= 0.0) || (l.value() == 0.0 && e < 0.0)) fail(n);
      return pow(l, e);
    }
  }
  return Jet(0.0);
}

}  // namespace

Expression::Expression() : root_(make({Literal{0.0}})) {}
Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::literal(double v) {
  if (std::signbit(v) && v != 0.0) return Expression(make({Unary{UnaryOp::Neg, make({Literal{-v}})}}));
  return Expression(make({Literal{v == 0.0 ? 0.0 : v}}));
}

Expression Expression::coord(int index) { return Expression(make({Coord{index}})); }

int Expression::max_coord() const { return max_coord_of(*root_); }

std::string Expression::to_string() const {
  std::string s;
  print(*root_, s);
  return s;
}

Expression Expression::remap(const std::function<int(int)>& map) const {
  std::function<NodePtr(const NodePtr&)> go = [&](const NodePtr& p) -> NodePtr {
    if (const auto* c = std::get_if<Coord>(&p->v)) return make({Coord{map(c->index)}});
    if (const auto* u = std::get_if<Unary>(&p->v)) return make({Unary{u->op, go(u->arg)}});
    if (const auto* b = std::get_if<Binary>(&p->v)) return make({Binary{b->op, go(b->lhs), go(b->rhs)}});
    return p;
  };
  return Expression(go(root_));
}

bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

Expression unary(UnaryOp op, const Expression& a) { return Expression(make({Unary{op, a.node()}})); }

Expression binary(BinaryOp op, const Expression& a, const Expression& b) {
  if (op == BinaryOp::Pow && !b.is_constant())
    throw Error(ErrorKind::Syntax, "exponent must be constant");
  return Expression(make({Binary{op, a.node(), b.node()}}));
}

Expression operator+(const Expression& a, const Expression& b) { return binary(BinaryOp::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return binary(BinaryOp::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return binary(BinaryOp::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return binary(BinaryOp::Div, a, b); }
Expression operator-(const Expression& a) { return unary(UnaryOp::Neg, a); }

Expression parse_expression(std::string_view text, int dim) {
  for (std::size_t i = 0; i < text.size(); ++i)
    if (static_cast<unsigned char>(text[i]) > 127) throw SyntaxError(i, "ASCII character");
  return Expression(Parser(text, dim).parse());
}

Jet eval_jet(const Expression& e, std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  if (e.max_coord() > n) throw DimensionError("x" + std::to_string(e.max_coord()), n);
  auto seed = [&](int i) { return Jet::variable(n, i, point[i], order); };
  auto where = [&] { return std::vector<double>(point.begin(), point.end()); };
  return evaluate(e.root(), seed, where).widened(n).truncated(order);
}

Jet eval_composed(const Expression& e, std::span<const Jet> inputs) {
  const int n = static_cast<int>(inputs.size());
  if (e.max_coord() > n) throw DimensionError("x" + std::to_string(e.max_coord()), n);
  auto seed = [&](int i) { return inputs[i]; };
  auto where = [&] {
    std::vector<double> v;
    for (const Jet& j : inputs) v.push_back(j.value());
    return v;
  };
  return evaluate(e.root(), seed, where);
}

double eval_value(const Expression& e, std::span<const double> point) {
  return eval_jet(e, point, 0).value();
}

}  // namespace lightfol
