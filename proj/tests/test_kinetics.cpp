#include <gtest/gtest.h>

#include <random>

#include "padicrd/errors.hpp"
#include "padicrd/expression.hpp"
#include "padicrd/kinetics.hpp"

using namespace padicrd;

namespace {

// Central differences computed here rather than through the library helper.
Jacobian central_differences(const KineticsModel& m, double u, double v, double h = 1e-6) {
  return {{{(m.f(u + h, v) - m.f(u - h, v)) / (2 * h), (m.f(u, v + h) - m.f(u, v - h)) / (2 * h)},
           {(m.g(u + h, v) - m.g(u - h, v)) / (2 * h), (m.g(u, v + h) - m.g(u, v - h)) / (2 * h)}}};
}

void expect_relative(const Jacobian& a, const Jacobian& b, double tol) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_LE(std::abs(a[i][j] - b[i][j]), tol * std::max(1.0, std::abs(b[i][j]))) << i << j;
    }
  }
}

// Random expression over u, v, A, B with small integer powers.
expr::ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  using namespace expr;
  const int pick = static_cast<int>(rng() % (depth > 0 ? 9 : 4));
  switch (pick) {
    case 0: return constant(static_cast<double>(rng() % 20) / 4.0);
    case 1: return variable("u");
    case 2: return variable("v");
    case 3: return parameter(rng() % 2 ? "A" : "B");
    case 4: return binary(Kind::add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return binary(Kind::sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return binary(Kind::mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: return binary(Kind::div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default:
      return rng() % 2 ? power(random_expr(rng, depth - 1), static_cast<int>(rng() % 4))
                       : negate(random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST(Expression, PrecedenceAndAssociativity) {
  const std::map<std::string, double> none;
  EXPECT_DOUBLE_EQ(expr::evaluate(expr::parse("1+2*3"), 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(expr::evaluate(expr::parse("2^3^2"), 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(expr::evaluate(expr::parse("-u^2"), 3, 0), -9.0);
  EXPECT_DOUBLE_EQ(expr::evaluate(expr::parse("8/4/2"), 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(expr::evaluate(expr::parse("u-v-1"), 5, 2), 2.0);
}

TEST(Expression, SyntaxErrorsCarryPosition) {
  try {
    expr::parse("u*(");
    FAIL() << "no error";
  } catch (const expr::ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(expr::parse("u^v"), expr::ParseError);
  EXPECT_THROW(expr::parse("u v"), expr::ParseError);
  EXPECT_THROW(expr::parse(""), expr::ParseError);
}

TEST(Expression, UnknownIdentifierAndDivisionByZero) {
  EXPECT_THROW(expr::bind(expr::parse("A*u + K"), {{"A", 1.0}}), ConfigError);
  EXPECT_THROW(expr::evaluate(expr::parse("1/(u-v)"), 1, 1), NumericalError);
}

TEST(Expression, DerivativeOfU2V) {
  const auto d = expr::differentiate(expr::parse("u^2*v"), "u");
  EXPECT_EQ(expr::print(d), "2*u*v");
  EXPECT_TRUE(expr::equal(d, expr::simplify(expr::parse("2*u*v"))));
  const double h = 1e-6, u = 1.3, v = -0.7;
  const auto f = expr::parse("u^2*v");
  EXPECT_NEAR(expr::evaluate(d, u, v), (expr::evaluate(f, u + h, v) - expr::evaluate(f, u - h, v)) / (2 * h), 1e-7);
}

TEST(Expression, RandomRoundTrip) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const auto e = random_expr(rng, 4);
    const auto text = expr::print(e);
    const auto back = expr::parse(text);
    EXPECT_TRUE(expr::equal(e, back)) << text << " vs " << expr::print(back);
    EXPECT_EQ(expr::print(back), text);
  }
}

TEST(Brusselator, SteadyStateAndJacobian) {
  const auto m = brusselator(2.0, 4.5);
  const auto s = steady_state(m);
  EXPECT_EQ(s, std::pair(2.0, 2.25));
  const auto j = m.jacobian(s.first, s.second);
  const Jacobian expect{{{3.5, 4.0}, {-4.5, -4.0}}};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(j[a][b], expect[a][b], 1e-14);
  }
  expect_relative(central_differences(m, 2.0, 2.25), j, 1e-7);
  EXPECT_THROW(brusselator(0.0, 1.0), ArgumentError);
}

TEST(Brusselator, TraceAndDeterminantFormulas) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  for (int k = 0; k < 50; ++k) {
    const double A = dist(rng), B = dist(rng);
    const auto m = brusselator(A, B);
    const auto [u, v] = steady_state(m);
    EXPECT_LE(std::abs(m.f(u, v)), 1e-12);
    EXPECT_LE(std::abs(m.g(u, v)), 1e-12);
    const auto j = m.jacobian(u, v);
    EXPECT_NEAR(j[0][0] + j[1][1], B - 1 - A * A, 1e-12);
    EXPECT_NEAR(j[0][0] * j[1][1] - j[0][1] * j[1][0], A * A, 1e-10);
  }
}

TEST(Cima, SteadyState) {
  const auto m = cima(10.0, 2.0, 1.0);
  const auto [u, v] = steady_state(m);
  EXPECT_DOUBLE_EQ(u, 10.0 / 9.0);
  EXPECT_NEAR(v, 2.0 * (1.0 + 100.0 / 81.0), 1e-14);
  EXPECT_LE(std::abs(m.f(u, v)), 1e-12);
  EXPECT_LE(std::abs(m.g(u, v)), 1e-12);
  EXPECT_THROW(cima(1.0, -1.0, 1.0), ArgumentError);
}

TEST(Jacobians, MatchCentralDifferencesInBox) {
  std::mt19937_64 rng(17);
  const std::vector<KineticsModel> models{
      brusselator(2.0, 4.5), cima(10.0, 2.0, 1.0),
      parse_kinetics("A - (B+1)*u + u^2*v", "B*u - u^2*v", {{"A", 1.5}, {"B", 3.0}}, ValidityBox{0.2, 5.0})};
  for (const auto& m : models) {
    std::uniform_real_distribution<double> dist(std::max(m.box().a, 0.2), std::min(m.box().b, 5.0));
    for (int k = 0; k < 100; ++k) {
      const double u = dist(rng), v = dist(rng);
      expect_relative(central_differences(m, u, v), m.jacobian(u, v), 1e-6);
    }
  }
}

TEST(Custom, MatchesBuiltinBrusselator) {
  const auto custom = parse_kinetics("A - (B+1)*u + u^2*v", "B*u - u^2*v", {{"A", 2.0}, {"B", 4.5}});
  const auto builtin = brusselator(2.0, 4.5);
  EXPECT_LE(std::abs(custom.f(2.0, 2.25)), 1e-12);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-3, 3);
  for (int k = 0; k < 100; ++k) {
    const double u = dist(rng), v = dist(rng);
    EXPECT_NEAR(custom.f(u, v), builtin.f(u, v), 1e-12);
    EXPECT_NEAR(custom.g(u, v), builtin.g(u, v), 1e-12);
  }
}

TEST(Custom, NewtonSteadyState) {
  const auto m = parse_kinetics("v - u", "u*v - 1", {}, {}, std::pair(0.5, 2.0));
  const auto [u, v] = steady_state(m, std::pair(0.5, 2.0));
  // bisection on u^2 = 1 along the invariant line v = u
  double lo = 0.1, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid - 1.0 > 0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(u, lo, 1e-12);
  EXPECT_NEAR(v, lo, 1e-12);
  EXPECT_THROW(steady_state(m), ArgumentError);
}

TEST(Custom, SteadyStateOutsideBox) {
  const auto m = parse_kinetics("v - u", "u*v - 1", {}, ValidityBox{2.0, 5.0});
  EXPECT_THROW(steady_state(m, std::pair(3.0, 3.0)), NumericalError);
}

TEST(Hypothesis, GradientsAtSteadyState) {
  const auto m = brusselator(2.0, 4.5);
  EXPECT_TRUE(gradients_nonvanishing(m.jacobian(2.0, 2.25)));
  EXPECT_FALSE(gradients_nonvanishing(Jacobian{{{0, 0}, {1, 0}}}));
}
