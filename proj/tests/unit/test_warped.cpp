#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "lightfol/scenario.hpp"
#include "lightfol/warped.hpp"
#include "support.hpp"

using namespace lightfol;
using testgen::shipped;

namespace {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Validation;
}

WarpedSpec explicit_fibre(int q, const std::string& warp, int m, const std::vector<std::string>& entries) {
  WarpedSpec s{MetricField::flat(q, 0), FibreMetric{}, parse_expression(warp, q), std::nullopt};
  s.fibre.dim = m;
  for (const auto& e : entries) s.fibre.entries.push_back(parse_expression(e, m));
  return s;
}

// Fibre metric (1 + y1^2) Pᵀ D P with D = diag(ε) holding `zeros` zero entries.
// Its kernel is spanned by the columns of P⁻¹ sitting at those zeros.
struct RandomFibre {
  WarpedSpec spec;
  std::vector<std::vector<double>> kernel;  // in fibre coordinates
};

RandomFibre random_fibre(testgen::Rng& rng, int q, int m, int zeros) {
  Eigen::MatrixXd p(m, m);
  do {
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) p(i, k) = rng.uniform(-1, 1);
  } while (std::abs(p.determinant()) < 0.2);
  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) d(i) = i < zeros ? 0.0 : (rng.coin() ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
  const Eigen::MatrixXd g = p.transpose() * d.asDiagonal() * p;
  const Eigen::MatrixXd pinv = p.inverse();

  RandomFibre r{WarpedSpec{MetricField::flat(q, 0), FibreMetric{}, parse_expression("2 + sin(x1)", q), zeros},
                {}};
  r.spec.fibre.dim = m;
  const Expression bump = parse_expression("1 + x1^2", m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) r.spec.fibre.entries.push_back(bump * Expression::literal(g(i, k)));
  for (int c = 0; c < zeros; ++c) {
    std::vector<double> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) v[i] = pinv(i, c);
    r.kernel.push_back(v);
  }
  return r;
}

}  // namespace

TEST_CASE("a totally degenerate line warped over R gives diag(1, 0) with a fully lightlike fibre") {
  const ScenarioFile s = shipped("warped_line");
  REQUIRE(s.warped);
  for (const Point& p : scenario_samples(s)) {
    const Eigen::MatrixXd g = assemble_warped_metric(*s.warped, p).values();
    CHECK(g(0, 0) == 1.0);
    CHECK(g(0, 1) == 0.0);
    CHECK(g(1, 0) == 0.0);
    CHECK(g(1, 1) == 0.0);
    const FibreRadical r = fibre_radical_check(*s.warped, p);
    CHECK(r.rank == 1);
    CHECK(r.injected_rank == 1);
    CHECK(r.span_residual <= 1e-12);
    CHECK(r.pass);
  }
}

TEST_CASE("the pulled-back level set fibre has Gram [[0,0],[0,2]] and a rank one radical") {
  const ScenarioFile s = shipped("warped_levelset");
  REQUIRE(s.warped);
  for (const Point& p : scenario_samples(s)) {
    const Eigen::MatrixXd g = assemble_warped_metric(*s.warped, p).values();
    REQUIRE(g.rows() == 3);
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(g(1, 1)) <= 1e-14);
    CHECK(std::abs(g(1, 2)) <= 1e-14);
    CHECK(g(2, 2) == doctest::Approx(2.0).epsilon(1e-14));
    const FibreRadical r = fibre_radical_check(*s.warped, p);
    CHECK(r.rank == 1);
    CHECK(r.pass);
  }
}

TEST_CASE("pullback metric along a curved embedding with first derivatives") {
  // j(a, b) = (a, b, a b) into Euclidean R^3: g = [[1 + b^2, a b], [a b, 1 + a^2]].
  WarpedSpec s{MetricField::flat(1, 0), FibreMetric{}, parse_expression("1", 1), std::nullopt};
  s.fibre.dim = 2;
  s.fibre.ambient = MetricField::flat(3, 0);
  s.fibre.embedding = {parse_expression("x1", 2), parse_expression("x2", 2), parse_expression("x1*x2", 2)};
  testgen::Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const Point p = testgen::point(rng, 3, -2, 2);
    const double a = p[1], b = p[2];
    const JetMat g = fibre_metric_at(s, p);
    CHECK(g(0, 0).value() == doctest::Approx(1 + b * b));
    CHECK(g(0, 1).value() == doctest::Approx(a * b));
    CHECK(g(1, 1).value() == doctest::Approx(1 + a * a));
    CHECK(g(0, 0).grad(2) == doctest::Approx(2 * b));
    CHECK(g(0, 0).grad(1) == doctest::Approx(0.0));
    CHECK(g(0, 1).grad(1) == doctest::Approx(b));
    CHECK(g(1, 1).order() == 1);  // one order is spent on the Jacobian of j
    CHECK(g(0, 0).grad(0) == 0.0);  // nothing depends on the base
  }
  // Nondegenerate fibre: the radical check refuses it.
  CHECK(kind_of([&] { fibre_radical_check(s, Point{0.1, 0.2, 0.3}); }) == ErrorKind::NotLightlike);

  // (a^2, a^2, b) into R^3_1 is degenerate along ∂a everywhere.
  s.fibre.ambient = MetricField::flat(3, 1);
  s.fibre.embedding = {parse_expression("x1^2", 2), parse_expression("x1^2", 2), parse_expression("x2", 2)};
  const FibreRadical r = fibre_radical_check(s, Point{0, 0.7, -0.4});
  CHECK(r.rank == 1);
  CHECK(r.pass);
}

TEST_CASE("warped metric errors") {
  WarpedSpec s = explicit_fibre(1, "x1", 1, {"0"});
  CHECK(kind_of([&] { assemble_warped_metric(s, Point{0.0, 1.0}); }) == ErrorKind::NonPositiveWarp);
  CHECK(kind_of([&] { assemble_warped_metric(s, Point{-0.5, 1.0}); }) == ErrorKind::NonPositiveWarp);
  CHECK_NOTHROW(assemble_warped_metric(s, Point{0.5, 1.0}));
  CHECK(kind_of([&] { assemble_warped_metric(s, Point{0.5}); }) == ErrorKind::Dimension);

  s.rho = 2;
  CHECK(kind_of([&] { fibre_radical_check(s, Point{0.5, 1.0}); }) == ErrorKind::RankMismatch);

  const WarpedSpec riem = explicit_fibre(1, "1", 2, {"1", "0", "0", "3"});
  CHECK(kind_of([&] { fibre_radical_check(riem, Point{0, 0, 0}); }) == ErrorKind::NotLightlike);
}

TEST_CASE("block orthogonality and warp scaling on random degenerate fibres") {
  testgen::Rng rng(72);
  for (int t = 0; t < 60; ++t) {
    const int q = rng.integer(1, 3), m = rng.integer(2, 4), zeros = rng.integer(1, m - 1);
    RandomFibre rf = random_fibre(rng, q, m, zeros);
    const Point p = testgen::point(rng, q + m, -1, 1);
    const double c = rng.uniform(0.3, 3.0);

    const Eigen::MatrixXd g = assemble_warped_metric(rf.spec, p).values();
    for (int i = 0; i < q; ++i)
      for (int k = 0; k < m; ++k) {
        CHECK(g(i, q + k) == 0.0);
        CHECK(g(q + k, i) == 0.0);
      }

    // The kernel vectors really are null for the fibre metric.
    const Eigen::MatrixXd gb = fibre_metric_at(rf.spec, p).values();
    for (const auto& v : rf.kernel)
      CHECK((gb * Eigen::Map<const Eigen::VectorXd>(v.data(), m)).norm() <= 1e-9);

    const FibreRadical r = fibre_radical_check(rf.spec, p);
    CHECK(r.rank == zeros);
    CHECK(r.injected_rank == zeros);
    CHECK(r.pass);

    WarpedSpec scaled = rf.spec;
    scaled.warp = Expression::literal(c) * rf.spec.warp;
    const Eigen::MatrixXd gs = assemble_warped_metric(scaled, p).values();
    CHECK((gs.bottomRightCorner(m, m) - c * c * g.bottomRightCorner(m, m)).norm() <=
          1e-12 * (1 + g.norm()) * c * c);
    CHECK((gs.topLeftCorner(q, q) - g.topLeftCorner(q, q)).norm() == 0.0);
    const FibreRadical rs = fibre_radical_check(scaled, p);
    CHECK(rs.rank == zeros);
    CHECK(rs.span_residual <= 1e-9);
  }
}

TEST_CASE("span distance") {
  CHECK(span_distance({{1, 0, 0}, {0, 1, 0}}, {{1, 1, 0}, {1, -1, 0}}) <= 1e-14);
  CHECK(span_distance({{1, 0}}, {{0, 1}}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(span_distance({{1, 0, 0}}, {{2, 0, 0}, {4, 0, 0}}) <= 1e-14);
  CHECK(span_distance({}, {}) == 0.0);
}
