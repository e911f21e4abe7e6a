#include <random>

#include "doctest.h"
#include "gaudin/jet.hpp"
#include "gaudin/linalg.hpp"
#include "gaudin/pencil.hpp"
#include "gaudin/rational_function.hpp"

using namespace gaudin;

namespace {

using Poly = Polynomial<Rational>;
using RF = RationalFunction<Rational>;

Rational q(long p, long d = 1) { return Rational(p, d); }

Poly random_poly(std::mt19937& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree), c(-4, 4);
  std::vector<Rational> v(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : v) x = c(rng);
  return Poly(v);
}

RF random_rf(std::mt19937& rng) {
  Poly den = random_poly(rng, 2);
  while (den.is_zero()) den = random_poly(rng, 2);
  return RF(random_poly(rng, 2), den);
}

OperatorPencil<RF> random_pencil(std::mt19937& rng, int order) {
  std::vector<RF> c;
  for (int k = 0; k < order; ++k) c.push_back(random_rf(rng));
  c.push_back(RF::constant(1));
  return OperatorPencil<RF>(c);
}

}  // namespace

TEST_CASE("rational function arithmetic") {
  const RF inv(Poly::one(), Poly::linear_factor(1));  // 1/(u-1)
  CHECK(derivative(inv) == RF(Poly::constant(-1), Poly::linear_factor(1).pow(2)));

  const Poly f = Poly::from_roots({0, 1});  // u(u-1)
  CHECK(RF::log_derivative(f) == RF(Poly({-1, 2}), Poly({0, -1, 1})));

  const RF g(Poly({0, -1, 1}), Poly::linear_factor(q(1, 2)));
  CHECK(g(q(2)) == q(4, 3));
  CHECK_THROWS_AS(g(q(1, 2)), PoleEvaluation);
  CHECK_THROWS_AS(RF(Poly::one()) / RF(), DivisionByZero);

  // reduction: (u^2-1)/(u-1) = u+1
  CHECK(RF(Poly({-1, 0, 1}), Poly({-1, 1})) == RF(Poly({1, 1})));
  CHECK(RF(Poly({2}), Poly({4, 2})).den() == Poly({2, 1}));
}

TEST_CASE("series at infinity") {
  const Rational z = q(3, 2);
  auto s = series_at_infinity(RF(Poly::one(), Poly::linear_factor(z)), 5);
  for (int j = 1; j <= 5; ++j) {
    Rational zp = 1;
    for (int k = 1; k < j; ++k) zp *= z;
    CHECK(s[static_cast<std::size_t>(j)] == zp);
  }
  CHECK(s[0] == 0);

  s = series_at_infinity(RF(Poly::constant(2), Poly({0, -1, 1})), 6);
  CHECK(s == std::vector<Rational>{0, 0, 2, 2, 2, 2, 2});

  s = series_at_infinity(RF(), 4);
  CHECK(s == std::vector<Rational>(5, 0));
  CHECK_THROWS_AS(series_at_infinity(RF(Poly({0, 0, 1}), Poly({1, 1})), 3), ImproperRational);

  // sums and products expand coefficientwise / by Cauchy product
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Poly d1 = random_poly(rng, 3), d2 = random_poly(rng, 3);
    if (d1.degree() < 1 || d2.degree() < 1) continue;
    const RF a(random_poly(rng, d1.degree() - 1), d1);
    const RF b(random_poly(rng, d2.degree() - 1), d2);
    const int jm = 8;
    const auto sa = series_at_infinity(a, jm), sb = series_at_infinity(b, jm);
    const auto ssum = series_at_infinity(a + b, jm), sprod = series_at_infinity(a * b, jm);
    for (int j = 0; j <= jm; ++j) {
      CHECK(ssum[static_cast<std::size_t>(j)] == sa[static_cast<std::size_t>(j)] + sb[static_cast<std::size_t>(j)]);
      Rational c = 0;
      for (int k = 0; k <= j; ++k) c += sa[static_cast<std::size_t>(k)] * sb[static_cast<std::size_t>(j - k)];
      CHECK(sprod[static_cast<std::size_t>(j)] == c);
    }
  }
}

TEST_CASE("pencil composition examples") {
  const RF a(Poly::one(), Poly::linear_factor(2));
  const RF b(Poly({1, 0, 3}), Poly({5, 1}));
  const RF one = RF::constant(1);
  const auto p = compose(OperatorPencil<RF>::first_order(a, one), OperatorPencil<RF>::first_order(b, one));
  REQUIRE(p.order() == 2);
  CHECK(p.coefficient(2) == one);
  CHECK(p.coefficient(1) == -(a + b));
  CHECK(p.coefficient(0) == a * b - derivative(b));

  const OperatorPencil<RF> id({one});
  CHECK(compose(id, p).coeffs() == p.coeffs());
  CHECK(compose(p, id).coeffs() == p.coeffs());

  const OperatorPencil<RF> d({RF(), one});
  CHECK(compose(d, d).coeffs() == std::vector<RF>{RF(), RF(), one});
}

TEST_CASE("pencil composition is associative and agrees with sequential application") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_pencil(rng, 1 + trial % 2), b = random_pencil(rng, 1), c = random_pencil(rng, 2);
    CHECK(compose(compose(a, b), c).coeffs() == compose(a, compose(b, c)).coeffs());

    std::uniform_int_distribution<int> deg(0, 8);
    const RF f(random_poly(rng, deg(rng)));
    CHECK(apply(compose(a, b), f) == apply(a, apply(b, f)));
  }
}

TEST_CASE("jets reproduce derivatives of rational functions") {
  // f = 2/(u-1) - 1/(u+3) at u0 = 1/2
  const Rational u0 = q(1, 2);
  const auto jet = Jet<Rational>::simple_pole(u0, 1, 2, 4) + Jet<Rational>::simple_pole(u0, -3, -1, 4);
  RF f = RF(Poly::constant(2), Poly::linear_factor(1)) - RF(Poly::one(), Poly::linear_factor(-3));
  Rational fact = 1;
  for (int k = 0; k <= 4; ++k) {
    CHECK(jet.coeffs()[static_cast<std::size_t>(k)] * fact == f(u0));
    f = derivative(f);
    fact *= (k + 1);
  }
  CHECK(derivative(jet).order() == 3);
}

TEST_CASE("exact linear algebra") {
  Matrix<Rational> a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 2; a(1, 1) = 4; a(1, 2) = 6;
  CHECK(rank(a) == 1);
  const auto ns = nullspace(a);
  CHECK(ns.cols() == 2);
  CHECK((a * ns).is_zero());

  Matrix<Rational> m(2, 2);
  m(0, 0) = 2; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 3;
  CHECK(determinant(m) == 5);
  const auto x = solve(m, Matrix<Rational>::identity(2));
  CHECK(m * x == Matrix<Rational>::identity(2));
  // tall systems: consistent and inconsistent right-hand sides
  Matrix<Rational> col(2, 1), rhs(2, 1);
  col(0, 0) = 1;
  rhs(0, 0) = 3;
  CHECK(solve(col, rhs)(0, 0) == 3);
  rhs(1, 0) = 1;
  CHECK_THROWS_AS(solve(col, rhs), DimensionMismatch);

  CHECK(parse_rational("-3/6") == q(-1, 2));
  CHECK(parse_rational("0.25") == q(1, 4));
  CHECK(parse_rational("-1.5") == q(-3, 2));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("x"), SchemaError);
  CHECK(to_string(q(2, 4)) == "1/2");
}
