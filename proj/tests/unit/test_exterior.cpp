#include <cmath>

#include "doctest.h"
#include "lightfol/exterior.hpp"
#include "support.hpp"

using namespace lightfol;

namespace {

constexpr Convention kUnit = Convention::UnitShuffle;
constexpr Convention kFact = Convention::FactorialAlternation;

std::vector<double> basis(int n, int i) {
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  e[i] = 1.0;
  return e;
}

FormJet dx(int n, int i) { return FormJet::one_form(constant_vector(basis(n, i))); }

FormField random_field_form(testgen::Rng& rng, int n, int k) {
  FormField f(n, k);
  for (const auto& idx : subsets(n, k)) f.set(idx, testgen::polynomial(rng, n, 3, 3));
  return f;
}

JetVec random_vector_field(testgen::Rng& rng, int n, const Point& p) {
  JetVec v;
  for (int i = 0; i < n; ++i) v.push_back(eval_jet(testgen::polynomial(rng, n, 3, 2), p));
  return v;
}

double det(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

}  // namespace

TEST_CASE("convention anchors") {
  const FormJet w = wedge(dx(2, 0), dx(2, 1));
  CHECK(evaluate(w, {basis(2, 0), basis(2, 1)}) == 1.0);
  CHECK(evaluate(w, {basis(2, 1), basis(2, 0)}) == -1.0);
  CHECK(evaluate(w, {basis(2, 0), basis(2, 1)}, kFact) == doctest::Approx(0.5));
  const FormJet vol = wedge_all({dx(4, 0), dx(4, 1), dx(4, 2), dx(4, 3)}, 4);
  CHECK(evaluate(vol, {basis(4, 0), basis(4, 1), basis(4, 2), basis(4, 3)}) == 1.0);
  CHECK(evaluate(vol, {basis(4, 0), basis(4, 1), basis(4, 2), basis(4, 3)}, kFact) == doctest::Approx(1.0 / 24));
  CHECK(convention_name(parse_convention(convention_name(kFact))) == convention_name(kFact));
}

TEST_CASE("wedge of one-forms evaluates to the determinant of pairings") {
  testgen::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(2, 6), k = rng.integer(1, n);
    std::vector<FormJet> alphas;
    std::vector<std::vector<double>> a, v;
    for (int i = 0; i < k; ++i) {
      a.push_back(testgen::point(rng, n));
      v.push_back(testgen::point(rng, n));
      alphas.push_back(FormJet::one_form(constant_vector(a.back())));
    }
    std::vector<std::vector<double>> pair(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int c = 0; c < n; ++c) pair[i][j] += a[i][c] * v[j][c];
    const FormJet w = wedge_all(alphas, n);
    const double want = det(pair);
    CHECK(std::abs(evaluate(w, v) - want) <= 1e-12 * (1 + std::abs(want)));
    CHECK(std::abs(evaluate(w, v, kFact) - want / factorial(k)) <= 1e-12 * (1 + std::abs(want)));
  }
}

TEST_CASE("wedge algebra: odd squares vanish, associativity, graded commutativity") {
  testgen::Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const int n = 7;
    const Point p = testgen::point(rng, n);
    const FormJet a1 = random_field_form(rng, n, 1).at(p), a3 = random_field_form(rng, n, 3).at(p);
    const FormJet b2 = random_field_form(rng, n, 2).at(p);
    CHECK(wedge(a1, a1).max_abs() <= 1e-12);
    CHECK(wedge(a3, a3).max_abs() <= 1e-10);
    const double assoc = (wedge(wedge(a1, b2), a3) - wedge(a1, wedge(b2, a3))).max_abs();
    CHECK(assoc <= 1e-12 * (1 + wedge(a1, wedge(b2, a3)).max_abs()));
    // α ∧ β = (−1)^{kl} β ∧ α
    CHECK((wedge(a1, a3) + wedge(a3, a1)).max_abs() <= 1e-12 * (1 + wedge(a1, a3).max_abs()));
    CHECK((wedge(a1, b2) - wedge(b2, a1)).max_abs() <= 1e-12 * (1 + wedge(a1, b2).max_abs()));
    CHECK((wedge(a3, b2) - wedge(b2, a3)).max_abs() <= 1e-12 * (1 + wedge(a3, b2).max_abs()));
    CHECK((wedge(a1, a3 + a3) + Jet(-2.0) * wedge(a1, a3)).max_abs() <= 1e-12 * (1 + wedge(a1, a3).max_abs()));
    const FormJet c1 = random_field_form(rng, n, 1).at(p);
    CHECK((wedge(a1, c1) + wedge(c1, a1)).max_abs() <= 1e-12 * (1 + wedge(a1, c1).max_abs()));
  }
}

TEST_CASE("exterior derivative examples") {
  FormField c(3, 1);
  c.set({0}, parse_expression("2", 3));
  c.set({2}, parse_expression("-0.5", 3));
  CHECK(exterior_derivative(c.at(Point{0.1, 0.2, 0.3})).max_abs() == 0.0);

  FormField x1dx2(2, 1);
  x1dx2.set({1}, parse_expression("x1", 2));
  const FormJet d = exterior_derivative(x1dx2.at(Point{0.4, -0.7}));
  CHECK(d.k == 2);
  CHECK(d[{0, 1}].value() == 1.0);

  // d f for a function is its differential.
  const FormJet f = FormJet::scalar(2, eval_jet(parse_expression("x1^2*x2", 2), Point{3, 2}));
  const FormJet df = exterior_derivative(f);
  CHECK(df[{0}].value() == doctest::Approx(12.0));
  CHECK(df[{1}].value() == doctest::Approx(9.0));
}

TEST_CASE("d squares to zero and obeys the graded Leibniz rule") {
  testgen::Rng rng(3);
  for (int t = 0; t < 150; ++t) {
    const int n = rng.integer(2, 5), k = rng.integer(0, n - 2);
    const Point p = testgen::point(rng, n);
    for (Convention conv : {kUnit, kFact}) {
      const FormJet a = random_field_form(rng, n, k).at(p);
      const FormJet dd = exterior_derivative(exterior_derivative(a, conv), conv);
      CHECK(dd.max_abs() <= 1e-10 * (1 + a.max_abs()));
    }
    if (k + 1 >= n) continue;
    const int l = rng.integer(0, n - k - 2);
    const FormJet a = random_field_form(rng, n, k).at(p), b = random_field_form(rng, n, l).at(p);
    const FormJet lhs = exterior_derivative(wedge(a, b));
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    const FormJet rhs = wedge(exterior_derivative(a), b) + Jet(sign) * wedge(a, exterior_derivative(b));
    CHECK((lhs - rhs).max_abs() <= 1e-9 * (1 + lhs.max_abs()));
  }
}

TEST_CASE("invariant formula for d holds in both conventions on non-coordinate fields") {
  testgen::Rng rng(4);
  for (int t = 0; t < 80; ++t) {
    const int n = rng.integer(2, 4), k = rng.integer(1, n - 1);
    const Point p = testgen::point(rng, n);
    const FormJet a = random_field_form(rng, n, k).at(p);
    std::vector<JetVec> x;
    for (int i = 0; i <= k; ++i) x.push_back(random_vector_field(rng, n, p));
    for (Convention conv : {kUnit, kFact}) {
      double rhs = 0.0;
      for (int i = 0; i <= k; ++i) {
        std::vector<JetVec> rest;
        for (int j = 0; j <= k; ++j)
          if (j != i) rest.push_back(x[j]);
        rhs += (i % 2 == 0 ? 1.0 : -1.0) * derivative_along(x[i], evaluate(a, rest, conv)).value();
      }
      for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
          std::vector<JetVec> rest{bracket(x[i], x[j])};
          for (int l = 0; l <= k; ++l)
            if (l != i && l != j) rest.push_back(x[l]);
          rhs += ((i + j) % 2 == 0 ? 1.0 : -1.0) * evaluate(a, rest, conv).value();
        }
      const double lhs = evaluate(exterior_derivative(a, conv), x, conv).value();
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(rhs)));
    }
  }
}

TEST_CASE("interior product examples and degree errors") {
  const FormJet w = wedge(dx(2, 0), dx(2, 1));
  const FormJet i1 = interior(constant_vector(basis(2, 0)), w);
  CHECK(i1[{0}].value() == 0.0);
  CHECK(i1[{1}].value() == 1.0);
  const FormJet i2 = interior(constant_vector(basis(2, 1)), w);
  CHECK(i2[{0}].value() == -1.0);
  // Factorial mode contracts the first slot of the 1/2-weighted evaluation.
  const FormJet if1 = interior(constant_vector(basis(2, 0)), w, kFact);
  CHECK(evaluate(if1, {basis(2, 1)}, kFact) == doctest::Approx(0.5));

  try {
    interior(constant_vector(basis(2, 0)), FormJet::scalar(2, Jet(1.0)));
    FAIL("expected DegreeUnderflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeUnderflow);
  }
  try {
    wedge(w, dx(2, 0));
    FAIL("expected DegreeOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeOverflow);
  }
  try {
    exterior_derivative(w);
    FAIL("expected DegreeOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeOverflow);
  }
}

TEST_CASE("interior product is first-slot contraction, squares to zero and is an antiderivation") {
  testgen::Rng rng(5);
  for (int t = 0; t < 150; ++t) {
    const int n = rng.integer(2, 6), k = rng.integer(1, n);
    const Point p = testgen::point(rng, n);
    const FormJet a = random_field_form(rng, n, k).at(p);
    const std::vector<double> xv = testgen::point(rng, n);
    const JetVec x = constant_vector(xv);
    std::vector<std::vector<double>> rest;
    for (int i = 1; i < k; ++i) rest.push_back(testgen::point(rng, n));
    std::vector<std::vector<double>> full{xv};
    full.insert(full.end(), rest.begin(), rest.end());
    for (Convention conv : {kUnit, kFact}) {
      const double lhs = evaluate(interior(x, a, conv), rest, conv), rhs = evaluate(a, full, conv);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * (1 + std::abs(rhs)));
      if (k >= 2) CHECK(interior(x, interior(x, a, conv), conv).max_abs() <= 1e-11 * (1 + a.max_abs()));
    }
    if (k < n) {
      const FormJet b1 = random_field_form(rng, n, 1).at(p);
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      const FormJet lhs = interior(x, wedge(a, b1));
      const FormJet rhs = wedge(interior(x, a), b1) + Jet(sign) * wedge(a, interior(x, b1));
      CHECK((lhs - rhs).max_abs() <= 1e-10 * (1 + lhs.max_abs()));
    }
  }
}

TEST_CASE("Lie derivative: Cartan against the bracket formula, and commutation with d") {
  testgen::Rng rng(6);
  for (int t = 0; t < 120; ++t) {
    const int n = rng.integer(2, 4), k = rng.integer(0, n - 1);
    const Point p = testgen::point(rng, n);
    const FormJet a = random_field_form(rng, n, k).at(p);
    const JetVec x = random_vector_field(rng, n, p);
    std::vector<JetVec> ys;
    for (int i = 0; i < k; ++i) ys.push_back(random_vector_field(rng, n, p));
    const FormJet l = lie_form(x, a);
    for (Convention conv : {kUnit, kFact}) {
      const double cartan = evaluate(l, ys, conv).value();
      const double br = lie_form_bracket(x, a, ys, conv).value();
      CHECK(std::abs(cartan - br) <= 1e-8 * (1 + std::abs(br)));
    }
    if (k + 1 < n) {
      const FormJet lhs = lie_form(x, exterior_derivative(a)), rhs = exterior_derivative(lie_form(x, a));
      CHECK((lhs - rhs).max_abs() <= 1e-8 * (1 + lhs.max_abs()));
    }
  }
  // Constant form along a constant field.
  CHECK(lie_form(constant_vector({1, 2, 3}), dx(3, 1)).max_abs() == 0.0);
}

TEST_CASE("basic forms for the flow of (1, 1, 0)") {
  const FrameProvider frame = [](const Point&) { return std::vector<JetVec>{constant_vector({1, 1, 0})}; };
  const std::vector<Point> samples{{0, 0, 0}, {0.5, -1, 2}, {1, 1, -1}};
  auto form = [](const char* comp, int idx) {
    FormField f(3, 1);
    f.set({idx}, parse_expression(comp, 3));
    return f;
  };
  CHECK(is_basic(form("1", 2), frame, samples).basic);
  CHECK(is_basic(form("x3", 2), frame, samples).basic);
  FormField mixed(3, 1);  // (dx1 - dx2) scaled by a function constant along the flow
  mixed.set({0}, parse_expression("x1 - x2", 3));
  mixed.set({1}, parse_expression("x2 - x1", 3));
  CHECK(is_basic(mixed, frame, samples).basic);

  const BasicResult along = is_basic(form("1", 0), frame, samples);  // dx1 sees the leaf direction
  CHECK_FALSE(along.basic);
  CHECK(along.residual == doctest::Approx(1.0));
  // x1 dx3 is annihilated by the flow, its derivative is not.
  const BasicResult second = is_basic(form("x1", 2), frame, samples);
  CHECK_FALSE(second.basic);
  CHECK(second.residual == doctest::Approx(1.0));
}

TEST_CASE("filtration degree on the leaf frame {d1, d2} of R^4") {
  const std::vector<JetVec> frame{constant_vector(basis(4, 0)), constant_vector(basis(4, 1))};
  CHECK(filtration_degree(wedge(dx(4, 2), dx(4, 3)), frame) == 2);
  CHECK(filtration_degree(wedge(dx(4, 0), dx(4, 3)), frame) == 1);
  CHECK(filtration_degree(wedge(dx(4, 0), dx(4, 1)), frame) == 0);
  CHECK(filtration_degree(FormJet::zero(4, 2), frame) == 3);
  CHECK(filtration_degree(dx(4, 3), frame) == 1);
  CHECK(filtration_degree(FormJet::scalar(4, Jet(2.0)), frame) == 0);
  // Monotone: a sum lands in the smaller filtration level.
  CHECK(filtration_degree(wedge(dx(4, 2), dx(4, 3)) + wedge(dx(4, 0), dx(4, 3)), frame) == 1);
}
