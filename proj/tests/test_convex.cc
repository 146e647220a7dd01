#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gammalab/function_io.h"
#include "gammalab/min_norm_point.h"

using namespace gammalab;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) m.row(i++) = vec(row).transpose();
  return m;
}

LambdaConvexFunction abs_function() { return LambdaConvexFunction::max_linear(rows({{1}, {-1}})); }

LambdaConvexFunction half_square(Eigen::Index d) {
  return LambdaConvexFunction::quadratic(Matrix::Identity(d, d), Vector::Zero(d));
}

// Resolvent of ε log cosh(y/ε) by bisection on y + τ tanh(y/ε) = x.
double logcosh_resolvent_bisection(double x, double tau, double eps) {
  double lo = x - tau;
  double hi = x + tau;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + tau * std::tanh(mid / eps) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("evaluate on the built-in kinds") {
  CHECK(evaluate(half_square(1), vec({2})) == doctest::Approx(2.0));
  CHECK(evaluate(abs_function(), vec({-3})) == 3.0);
  const auto ball = LambdaConvexFunction::indicator(Ball{Vector::Zero(2), 1.0});
  CHECK(std::isinf(evaluate(ball, vec({2, 0}))));
  CHECK(evaluate(ball, vec({1, 0})) == 0.0);
  CHECK(evaluate(ball, vec({1 + 1e-13, 0})) == 0.0);
  CHECK(std::isinf(evaluate(ball, vec({1 + 1e-9, 0}))));
  const auto box = LambdaConvexFunction::indicator(Box{vec({0, 0}), vec({1, 1})});
  CHECK(evaluate(box, vec({1, 1})) == 0.0);
  CHECK(evaluate(box, vec({std::nextafter(1.0, 2.0), 0.5})) == 0.0);
  CHECK(std::isinf(evaluate(box, vec({1 + 1e-9, 0.5}))));
  CHECK_THROWS_AS(evaluate(half_square(2), vec({1})), DimensionMismatch);
}

TEST_CASE("lambda bookkeeping") {
  const auto q = LambdaConvexFunction::quadratic(rows({{2, 0}, {0, -0.5}}), Vector::Zero(2));
  CHECK(q.lambda() == doctest::Approx(-0.5));
  CHECK(is_admissible(q, 1.9));
  CHECK_FALSE(is_admissible(q, 2.0));
  CHECK_THROWS_AS(prox(q, 2.5, vec({1, 1})), InadmissibleStep);
  CHECK_THROWS_AS(prox(q, 0.0, vec({1, 1})), InadmissibleStep);
  CHECK(abs_function().lambda() == 0.0);
  CHECK_THROWS_AS(LambdaConvexFunction::max_linear(Matrix(0, 1)), InvalidArgument);
  CHECK_THROWS_AS(LambdaConvexFunction::log_sum_exp(rows({{1}}), 0.0), InvalidArgument);
}

TEST_CASE("prox examples") {
  const ProxResult q = prox(half_square(1), 1.0, vec({2}));
  CHECK(q.resolvent_point(0) == doctest::Approx(1.0));
  CHECK(q.envelope_value == doctest::Approx(1.0));
  CHECK(q.moreau_gradient(0) == doctest::Approx(1.0));

  const ProxResult a = prox(abs_function(), 0.5, vec({2}));
  CHECK(a.resolvent_point(0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(moreau_gradient(abs_function(), 0.5, vec({0.2}))(0) == doctest::Approx(0.4).epsilon(1e-14));

  const auto ball = LambdaConvexFunction::indicator(Ball{Vector::Zero(2), 1.0});
  const Vector g = moreau_gradient(ball, 0.25, vec({2, 0}));
  CHECK(g(0) == doctest::Approx(4.0));
  CHECK(g(1) == doctest::Approx(0.0));
}

TEST_CASE("log-sum-exp resolvent against a bisection oracle") {
  const auto f = LambdaConvexFunction::log_sum_exp(rows({{1}, {-1}}), 0.1);
  for (double x : {2.0, 0.3, -0.05, -4.0}) {
    const ProxResult p = prox(f, 0.5, vec({x}));
    CHECK(p.solver_residual <= 1e-10);
    CHECK(std::abs(p.resolvent_point(0) - logcosh_resolvent_bisection(x, 0.5, 0.1)) <= 1e-12);
  }
  // Frozen from the bisection oracle.
  CHECK(prox(f, 0.5, vec({2})).resolvent_point(0) == doctest::Approx(1.5000000000000935).epsilon(1e-14));
}

TEST_CASE("quadratic resolvent against the spectral closed form") {
  const Matrix Q = rows({{2, 0.5, 0}, {0.5, 1, -0.3}, {0, -0.3, -0.4}});
  const Vector b = vec({0.1, -1, 2});
  const auto f = LambdaConvexFunction::quadratic(Q, b, 0.7);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(Q);
  const double tau = 1.2;
  const Vector x = vec({1, -2, 0.5});
  const Vector expected = eig.eigenvectors() *
                          (1.0 / (1.0 + tau * eig.eigenvalues().array())).matrix().asDiagonal() *
                          eig.eigenvectors().transpose() * (x - tau * b);
  const ProxResult p = prox(f, tau, x);
  CHECK((p.resolvent_point - expected).norm() <= 1e-12);
  CHECK((p.moreau_gradient - (Q * expected + b)).norm() <= 1e-10);
}

TEST_CASE("slope and minimal-norm subgradient examples") {
  CHECK(slope(half_square(2), vec({3, 4})) == doctest::Approx(5.0));
  CHECK(slope(abs_function(), vec({0})) == 0.0);
  const auto two = LambdaConvexFunction::max_linear(rows({{1, 0}, {0, 1}}));
  CHECK(slope(two, vec({1, 1})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(active_set(two, vec({1, 1})).size() == 2);
  CHECK(active_set(two, vec({1, 1 - 1e-6})).size() == 1);

  const auto diag = LambdaConvexFunction::quadratic(rows({{1, 0}, {0, 2}}), Vector::Zero(2));
  CHECK((min_norm_subgradient(diag, vec({1, 1})) - vec({1, 2})).norm() <= 1e-14);
  CHECK(min_norm_subgradient(abs_function(), vec({0}))(0) == 0.0);
  const auto box = LambdaConvexFunction::indicator(Box{vec({0, 0}), vec({1, 1})});
  CHECK(min_norm_subgradient(box, vec({0.5, 0.5})).norm() == 0.0);
  CHECK(std::isinf(slope(box, vec({2, 0.5}))));
  CHECK_THROWS_AS(min_norm_subgradient(box, vec({2, 0.5})), DomainError);

  const auto pen = LambdaConvexFunction::distance_penalty(Ball{Vector::Zero(2), 1.0}, 3.0);
  CHECK(slope(pen, vec({2, 0})) == doctest::Approx(6.0));
  CHECK(slope(pen, vec({0.2, 0})) == 0.0);
}

TEST_CASE("resolvent slope schedule is monotone and converges") {
  const auto r = slope_from_resolvents(half_square(1), vec({2}));
  CHECK(r.monotone);
  CHECK(r.taus.size() == 13);
  CHECK(r.last == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(std::abs(r.extrapolated - 2.0) < std::abs(r.last - 2.0));
  const auto neg = LambdaConvexFunction::quadratic(rows({{-2}}), Vector::Zero(1));
  CHECK(slope_from_resolvents(neg, vec({1})).taus.front() == doctest::Approx(0.25));
  const auto ball = LambdaConvexFunction::indicator(Ball{Vector::Zero(1), 1.0});
  const auto outside = slope_from_resolvents(ball, vec({2}));
  CHECK(outside.monotone);
  CHECK(outside.last > 1000.0);
}

TEST_CASE("sampled slope lower bound") {
  CHECK(sampled_slope_lower_bound(half_square(1), vec({1}), {vec({0.9}), vec({1.1})}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sampled_slope_lower_bound(abs_function(), vec({0}), {vec({-1}), vec({0.5}), vec({3})}) == 0.0);
  const auto box = LambdaConvexFunction::indicator(Box{vec({0}), vec({1})});
  CHECK(sampled_slope_lower_bound(box, vec({0.5}), {vec({0.1}), vec({0.9})}) == 0.0);
  CHECK_THROWS_AS(sampled_slope_lower_bound(box, vec({0.5}), {}), InvalidArgument);
  CHECK_THROWS_AS(sampled_slope_lower_bound(box, vec({0.5}), {vec({0.5})}), InvalidArgument);
}

TEST_CASE("min-norm point") {
  const Vector p = min_norm_point(std::vector<Vector>{vec({1, 0}), vec({0, 1})});
  CHECK((p - vec({0.5, 0.5})).norm() <= 1e-12);
  CHECK(min_norm_point(std::vector<Vector>{vec({2}), vec({-1})}).norm() <= 1e-14);
  CHECK((min_norm_point(std::vector<Vector>{vec({1, 1})}) - vec({1, 1})).norm() == 0.0);
  // Triangle away from the origin: nearest point on an edge.
  const Vector t = min_norm_point(std::vector<Vector>{vec({1, -1, 1}), vec({1, 1, 1}), vec({3, 0, 1})});
  CHECK((t - vec({1, 0, 1})).norm() <= 1e-12);
  // Many duplicated and collinear points.
  std::vector<Vector> many;
  for (int i = 0; i < 30; ++i) many.push_back(vec({2.0 + i % 3, 1.0 - 0.1 * i}));
  const MinNormResult r = min_norm_point([&] {
    Matrix m(2, 30);
    for (int i = 0; i < 30; ++i) m.col(i) = many[static_cast<std::size_t>(i)];
    return m;
  }());
  CHECK(std::abs(r.weights.sum() - 1.0) <= 1e-12);
  CHECK((r.weights.array() >= 0.0).all());
  CHECK(r.point(0) == doctest::Approx(2.0).epsilon(1e-12));
  const MinNormResult proj = project_onto_hull(rows({{0, 1}, {1, 0}}), vec({1, 1}));
  CHECK((proj.point - vec({0.5, 0.5})).norm() <= 1e-12);
}

TEST_CASE("set projections land in the set") {
  const ConvexSet h = Halfspace{vec({1, 1}).normalized(), 0.3};
  for (double s : {0.3, 1.0, 1e6, 1e-9}) {
    const Vector x = vec({s, s + 0.1});
    CHECK(contains(h, project(h, x)));
  }
  const ConvexSet b = Box{vec({-1, 0}), vec({1, 2})};
  CHECK((project(b, vec({3, -1})) - vec({1, 0})).norm() == 0.0);
  CHECK(distance(b, vec({3, -1})) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(validate_set(Box{vec({1}), vec({0})}), InvalidArgument);
  CHECK_THROWS_AS(validate_set(Ball{vec({0}), -1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_set(Halfspace{vec({0, 0}), 1.0}), InvalidArgument);
}

TEST_CASE("distance penalty resolvent slides to the projection") {
  const ConvexSet ball = Ball{Vector::Zero(2), 1.0};
  const Vector x = vec({3, 0});
  double previous = kInfinity;
  for (double h : {1.0, 10.0, 100.0, 1000.0}) {
    const auto f = LambdaConvexFunction::distance_penalty(ball, h);
    const Vector j = prox(f, 0.5, x).resolvent_point;
    CHECK((j - (x + 2 * h * 0.5 * vec({1, 0})) / (1 + 2 * h * 0.5)).norm() <= 1e-12);
    const double gap = (j - vec({1, 0})).norm();
    CHECK(gap < previous);
    previous = gap;
  }
}

TEST_CASE("json round trip") {
  const Json q = Json::parse(R"({"kind": "Quadratic", "lambda": 1, "params": {"Q": [[1, 0], [0, 3]], "b": [0, 1], "c": 2}})");
  const auto f = function_from_json(q);
  CHECK(f.lambda() == doctest::Approx(1.0));
  const auto g = function_from_json(to_json(f));
  CHECK(evaluate(g, vec({1, 2})) == evaluate(f, vec({1, 2})));
  CHECK_THROWS_AS(function_from_json(Json::parse(R"({"kind": "Quadratic", "lambda": 0.5, "params": {"Q": [[1]]}})")),
                  InvalidArgument);
  const auto set_f = function_from_json(Json::parse(
      R"({"kind": "Indicator", "params": {"set": {"type": "halfspace", "normal": [1, 0], "offset": 1}}})"));
  CHECK(std::isinf(evaluate(set_f, vec({2, 0}))));
  const Json round = to_json(function_from_json(to_json(set_f)));
  CHECK(round == to_json(set_f));
  CHECK(number_to_json(kInfinity) == "inf");
  CHECK(std::isinf(number_from_json(Json("inf"))));
  CHECK_THROWS(function_from_json(Json::parse(R"({"kind": "Cubic", "params": {}})")));
  CHECK(vector_from_json(Json(2.5))(0) == 2.5);
}
