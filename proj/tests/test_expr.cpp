#include "doctest.h"

#include "jetsym/eval.hpp"
#include "jetsym/parser.hpp"

#include <random>

using namespace jetsym;

namespace {

Chart xyz_chart() {
  Chart c;
  c.coords = {"x", "y", "z"};
  c.params = {{"c", Rational(1)}, {"k", Rational(1)}};
  return c;
}

RatExpr P(const std::string& s) { return parse_expr(s, xyz_chart()); }

std::string S(const RatExpr& e) {
  const Chart c = xyz_chart();
  return to_string(e, c.coords);
}

// Random expressions built from a fixed pool of pieces with the public operators.
RatExpr random_expr(std::mt19937& rng, int depth) {
  static const char* leaves[] = {"x", "y", "z", "3/2", "exp(x-y)", "sin(2*y)", "cos(x/3+z)",
                                 "x^2-y", "1+x^2", "exp(-z/2)", "7"};
  std::uniform_int_distribution<int> pick_leaf(0, 10);
  std::uniform_int_distribution<int> pick_op(0, 3);
  if (depth == 0) return P(leaves[pick_leaf(rng)]);
  RatExpr a = random_expr(rng, depth - 1);
  RatExpr b = random_expr(rng, depth - 1);
  switch (pick_op(rng)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    default: return a * b * b;
  }
}

std::vector<Rational> random_point(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 40);
  std::vector<Rational> p;
  for (int i = 0; i < 3; ++i) p.push_back(make_rational(num(rng), den(rng)));
  return p;
}

// Central difference with step h at 256 bits; accurate to roughly h^2.
Real numeric_partial(const RatExpr& e, std::vector<Rational> p, std::size_t var) {
  const Rational h = make_rational(1, 1000000);
  std::vector<Rational> a = p, b = p;
  a[var] += h;
  b[var] -= h;
  PrecisionScope scope(256);
  return (evaluate_at(e, a, 256) - evaluate_at(e, b, 256)) / to_real(2 * h);
}

}  // namespace

TEST_CASE("parse_expr reduces the documented examples") {
  CHECK(P("sin(x)^2 + cos(x)^2").as_constant() == Rational(1));
  CHECK(S(P("2*(2-c)*exp(c*x)")) == "2*exp(x)");
  const RatExpr q = P("x/y^3");
  CHECK(S(RatExpr(q.num())) == "x");
  CHECK(q.den_monomial() == Monomial{0, 3});
  CHECK(q.den_factors().empty());
}

TEST_CASE("parser errors carry positions") {
  const Chart c = xyz_chart();
  auto position_of = [&](const std::string& text) -> std::size_t {
    try {
      parse_expr(text, c);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 9999;
  };
  CHECK(position_of("x + w") == 4);
  CHECK(position_of("exp(x*y)") == 4);
  CHECK(position_of("x^1/2") == 3);
  CHECK(position_of("x^y") == 2);
  CHECK(position_of("(x + 1") == 6);
  CHECK(position_of("x $ y") == 2);
  CHECK_THROWS_AS(parse_expr("x/0", c), ParseError);
}

TEST_CASE("sinh and cosh expand into exponentials") {
  CHECK(S(P("cosh(x)^2 - sinh(x)^2")) == "1");
  CHECK(S(P("2*sinh(x)")) == "-exp(-x) + exp(x)");
}

TEST_CASE("differentiate examples") {
  CHECK(S(P("z^2").derivative(2)) == "2*z");
  CHECK(equal(P("exp(2*x)*x").derivative(0), P("exp(2*x)*(2*x+1)")));
  CHECK(equal(P("cos(3*x/5)^2").derivative(0), P("-3/5*sin(6*x/5)")));
  CHECK(equal(P("1/(1+x^2)").derivative(0), P("-2*x/(1+x^2)^2")));
  CHECK(equal(P("x/y^3").derivative(1), P("-3*x/y^4")));
}

TEST_CASE("canonicalize examples") {
  CHECK(S(P("sin(x)*cos(x)")) == "1/2*sin(2*x)");
  CHECK(S(P("exp(x)*exp(-x)")) == "1");
  CHECK(P("x + x - 2*x").num().terms().empty());
  CHECK(S(P("sin(-x)")) == "-sin(x)");
  CHECK(S(P("cos(-x+1)")) == "cos(x - 1)");
}

TEST_CASE("is_zero examples") {
  CHECK_FALSE(P("exp(x) - 1 - x").is_zero());
  CHECK(P("0/(1+x)").is_zero());
  CHECK((P("(x^2-y^2)/(x-y)") - P("x+y")).is_zero());
  CHECK((P("1/(1+x) - 1/(1+x)")).is_zero());
}

TEST_CASE("quotients cancel monomial and exact polynomial factors") {
  const RatExpr r = P("(x^2-1)/(x-1)");
  CHECK(r.has_trivial_den());
  CHECK(S(r) == "x + 1");
  const RatExpr s = P("x^2*y/(x*y^3)");
  CHECK(S(s) == "(x)/(y^2)");
  CHECK(S(P("exp(x)/exp(2*x)")) == "exp(-x)");
  CHECK(S(P("1/(2*exp(x)+2*exp(x)*y)")) == "(1/2*exp(-x))/(y + 1)");
}

TEST_CASE("evaluate_at examples") {
  const std::vector<Rational> p{make_rational(3, 2), Rational(0), Rational(0)};
  CHECK(evaluate_exact(P("x^2"), p) == make_rational(9, 4));
  CHECK(evaluate_at(P("exp(y)"), p, 256) == 1);
  CHECK_THROWS_AS(evaluate_at(P("1/y"), p, 256), EvaluationError);
  PrecisionScope scope(256);
  const Real e = evaluate_at(P("exp(x)"), std::vector<Rational>{Rational(1), 0, 0}, 256);
  CHECK(boost::multiprecision::abs(e - Real("2.71828182845904523536028747135266249775724709369995")) < Real("1e-45"));
}

TEST_CASE("printed form round-trips through the parser") {
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) {
    const RatExpr e = random_expr(rng, 3) / P("1+x^2");
    CHECK(P(S(e)).identical(e));
  }
}

TEST_CASE("powers of polynomial divisors keep their factored shape") {
  const RatExpr e = P("4") / P("1 + x^2 + y^2").pow(2) / P("x - y") / P("z^3");
  CHECK(P(S(e)).identical(e));
  CHECK(P("k/(1 + x^2)^2").identical(P("k/((1 + x^2)^2)")));
  CHECK(equal(P("1/(x/y)"), P("y/x")));
}

TEST_CASE("canonical forms agree with numeric sampling") {
  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    const RatExpr a = random_expr(rng, 2);
    const RatExpr b = random_expr(rng, 2);
    const bool same = a.identical(b);
    bool numerically_same = true;
    for (int j = 0; j < 10; ++j) {
      const auto p = random_point(rng);
      PrecisionScope scope(256);
      if (boost::multiprecision::abs(evaluate_at(a, p, 256) - evaluate_at(b, p, 256)) > Real("1e-60"))
        numerically_same = false;
    }
    CHECK(same == numerically_same);
    CHECK(equal(a, b) == same);
  }
}

TEST_CASE("is_zero agrees with sampling") {
  std::mt19937 rng(3);
  for (int i = 0; i < 30; ++i) {
    const RatExpr e = random_expr(rng, 2) - random_expr(rng, 2);
    if (e.is_zero()) continue;
    bool seen_nonzero = false;
    for (int j = 0; j < 20 && !seen_nonzero; ++j) {
      const auto p = random_point(rng);
      PrecisionScope scope(256);
      if (boost::multiprecision::abs(evaluate_at(e, p, 256)) > Real("1e-60")) seen_nonzero = true;
    }
    CHECK(seen_nonzero);
  }
}

TEST_CASE("derivative rules hold exactly and match finite differences") {
  std::mt19937 rng(5);
  for (int i = 0; i < 25; ++i) {
    const RatExpr a = random_expr(rng, 2);
    const RatExpr b = random_expr(rng, 2) / P("1 + y^2");
    const Rational s = make_rational(3, 7);
    for (std::size_t v = 0; v < 3; ++v) {
      CHECK(equal((a * RatExpr(s) + b).derivative(v), a.derivative(v) * RatExpr(s) + b.derivative(v)));
      CHECK(equal((a * b).derivative(v), a.derivative(v) * b + a * b.derivative(v)));
    }
    CHECK(equal(b.derivative(0).derivative(1), b.derivative(1).derivative(0)));
    const auto p = random_point(rng);
    PrecisionScope scope(256);
    const Real exact = evaluate_at(b.derivative(2), p, 256);
    const Real approx = numeric_partial(b, p, 2);
    CHECK(boost::multiprecision::abs(exact - approx) <= Real("1e-6") * (1 + boost::multiprecision::abs(exact)));
  }
}
