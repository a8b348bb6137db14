#include <doctest.h>

#include <random>
#include <string>

#include "dphase/error.hpp"
#include "dphase/expr.hpp"

using namespace dphase;

namespace {

double ev(const std::string& s, double x = 0.0, double y = 0.0) { return eval_expr(*parse_expr(s), {x, y}); }

std::size_t parse_offset(const std::string& s) {
  try {
    parse_expr(s);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for " << s);
  return 0;
}

// Random well-formed source text over the whole grammar.
std::string random_source(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 2);
  switch (pick(rng)) {
    case 0: return std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)) + ".25";
    case 1: return "x";
    case 2: return "y";
    case 3: return "(" + random_source(rng, depth - 1) + " + " + random_source(rng, depth - 1) + ")";
    case 4: return random_source(rng, depth - 1) + " * " + random_source(rng, depth - 1);
    case 5: return "-(" + random_source(rng, depth - 1) + ")";
    case 6: return "sin(" + random_source(rng, depth - 1) + ")";
    case 7: return "max(" + random_source(rng, depth - 1) + ", " + random_source(rng, depth - 1) + ")";
    default: return random_source(rng, depth - 1) + " ^ " + random_source(rng, depth - 1) + " / 2";
  }
}

}  // namespace

TEST_CASE("parse: single variable") {
  const auto ast = parse_expr("x");
  CHECK(ast->kind == ExprKind::Variable);
  CHECK(ast->variable == 'x');
}

TEST_CASE("precedence and associativity") {
  CHECK(ev("1 + 2*x^2", 2.0) == 9.0);
  CHECK(ev("2^3^2") == 512.0);     // right-associative
  CHECK(ev("-2^2") == 4.0);        // unary minus binds to the atom
  CHECK(ev("8/4/2") == 1.0);       // left-associative
  CHECK(ev("1 - 2 - 3") == -4.0);
  CHECK(ev("(1 + 2) * 3") == 9.0);
  CHECK(ev("1e-1 * 10") == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluation examples") {
  CHECK(ev("x", 0.25, 0.75) == 0.25);
  CHECK(ev("max(x,y)", 0.2, 0.9) == 0.9);
  CHECK(ev("min(x,y)", 0.2, 0.9) == 0.2);
  CHECK(ev("abs(x-0.5)", 0.25) == 0.25);
  CHECK(ev("sqrt(4) + exp(0) + cos(0) + sin(0)") == 4.0);
}

TEST_CASE("syntax errors carry offsets") {
  CHECK_THROWS_AS(parse_expr("min(x, y"), ParseError);
  CHECK(parse_offset("min(x, y") == 8);
  CHECK(parse_offset("x +") == 3);
  CHECK(parse_offset("1 $ 2") == 2);
  CHECK(parse_offset("") == 0);
  CHECK(parse_offset("(x") == 2);
  CHECK(parse_offset("x y") == 2);
}

TEST_CASE("unknown identifiers and arity") {
  CHECK_THROWS_AS(parse_expr("z + 1"), ParseError);
  CHECK_THROWS_AS(parse_expr("tan(x)"), ParseError);
  CHECK_THROWS_AS(parse_expr("min(x)"), ParseError);
  CHECK_THROWS_AS(parse_expr("sin(x, y)"), ParseError);
  try {
    parse_expr("x + foo");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("evaluation errors are explicit") {
  CHECK_THROWS_AS(ev("1/x"), Error);
  CHECK_THROWS_AS(ev("sqrt(x)", -1.0), Error);
  CHECK_THROWS_AS(ev("x^0.5", -1.0), Error);
  CHECK_THROWS_AS(ev("0^(-1)"), Error);
  CHECK_THROWS_AS(ev("exp(1000)"), Error);
  try {
    ev("1/x");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Eval);
  }
  CHECK(ev("(-8)^2") == 64.0);  // integer powers of negatives are fine
}

TEST_CASE("print/parse round trip on random expressions") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const std::string src = random_source(rng, 4);
    const auto a = parse_expr(src);
    const auto b = parse_expr(print_expr(*a));
    INFO(src);
    CHECK(structurally_equal(*a, *b));
    CHECK(print_expr(*b) == print_expr(*a));
  }
}

TEST_CASE("structural equality distinguishes trees") {
  CHECK(structurally_equal(*parse_expr("x+1"), *parse_expr("(x)+(1)")));
  CHECK_FALSE(structurally_equal(*parse_expr("x+1"), *parse_expr("1+x")));
  CHECK_FALSE(structurally_equal(*parse_expr("x"), *parse_expr("y")));
}

TEST_CASE("coefficient field") {
  const CoefficientField zero;
  CHECK(zero({0.3, 0.4}) == 0.0);
  const CoefficientField f("0.5+0.5*x");
  CHECK(f.source() == "0.5+0.5*x");
  CHECK(f({1.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(CoefficientField("x +"), ParseError);
}
