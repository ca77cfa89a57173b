#include <doctest.h>

#include <cmath>

#include "qmorse/errors.hpp"
#include "qmorse/expr.hpp"

using namespace qmorse;

TEST_CASE("grammar round trip on the quadratic") {
    ExprPtr t = parse_expression("x1^2 + x2^2", 2);
    REQUIRE(t != nullptr);
    CHECK(t->kind == NodeKind::Add);
    CHECK(eval_expr_double(*t, {1.0, 2.0}) == doctest::Approx(5.0));
}

TEST_CASE("syntax error carries the byte offset") {
    try {
        parse_expression("x1 +", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("variable index beyond dim is rejected") {
    CHECK_THROWS_AS((void)parse_expression("x3", 2), ParseError);
    CHECK_NOTHROW((void)parse_expression("x3", 3));
}

TEST_CASE("precedence and unary minus") {
    ExprPtr t = parse_expression("-x1 + 2 * x2^2", 2);
    CHECK(eval_expr_double(*t, {3.0, 2.0}) == doctest::Approx(5.0));
    ExprPtr u = parse_expression("2 - 3 - 4", 1);
    CHECK(eval_expr_double(*u, {0.0}) == doctest::Approx(-5.0));
    ExprPtr v = parse_expression("2 * x1 ^ 3", 1);
    CHECK(eval_expr_double(*v, {2.0}) == doctest::Approx(16.0));
}

TEST_CASE("transcendental calls and nesting") {
    ExprPtr t = parse_expression("sin(cos(x1)) + exp(x1 / 2)", 1);
    double x = 0.4;
    CHECK(eval_expr_double(*t, {x}) ==
          doctest::Approx(std::sin(std::cos(x)) + std::exp(x / 2)).epsilon(1e-14));
}

TEST_CASE("division guards the denominator") {
    ExprPtr t = parse_expression("1 / x1", 1);
    CHECK(eval_expr_double(*t, {0.5}) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)eval_expr_double(*t, {0.0}), DomainError);
}

TEST_CASE("unknown identifier is a parse error") {
    CHECK_THROWS_AS((void)parse_expression("tan(x1)", 1), ParseError);
    CHECK_THROWS_AS((void)parse_expression("y1", 1), ParseError);
}

TEST_CASE("integer exponents only") {
    CHECK_NOTHROW((void)parse_expression("x1^12", 1));
    CHECK_THROWS_AS((void)parse_expression("x1^1.5", 1), ParseError);
}
