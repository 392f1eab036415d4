#include <doctest.h>

#include <cmath>

#include "bbfs/expr.hpp"
#include "bbfs/numerics.hpp"

using namespace bbfs;

TEST_CASE("expression arithmetic and precedence") {
    CHECK(Expression::parse("1 + 2 * 3")({0, 0}) == doctest::Approx(7.0));
    CHECK(Expression::parse("(1 + 2) * 3")({0, 0}) == doctest::Approx(9.0));
    CHECK(Expression::parse("2 ^ 3 ^ 2")({0, 0}) == doctest::Approx(512.0));  // right assoc
    CHECK(Expression::parse("-2 ^ 2")({0, 0}) == doctest::Approx(-4.0));
    CHECK(Expression::parse("6 / 3 / 2")({0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("expression variables and functions") {
    Expression e = Expression::parse("abs(x1) ^ 0.5 + max(x2, 1)");
    CHECK(e({4.0, 3.0}) == doctest::Approx(2.0 + 3.0));
    CHECK(e({-9.0, 0.0}) == doctest::Approx(3.0 + 1.0));
    CHECK(Expression::parse("x")({2.5, 0}) == doctest::Approx(2.5));
    CHECK(Expression::parse("sign(x1)")({-3, 0}) == doctest::Approx(-1.0));
    CHECK(Expression::parse("step(x1)")({-3, 0}) == doctest::Approx(0.0));
    CHECK(Expression::parse("step(x1)")({3, 0}) == doctest::Approx(1.0));
    CHECK(Expression::parse("log(exp(2))")({0, 0}) == doctest::Approx(2.0));
    CHECK(Expression::parse("pi")({0, 0}) == doctest::Approx(3.14159265358979));
    CHECK(Expression::parse("t^2")(3.0) == doctest::Approx(9.0));
}

TEST_CASE("expression parse errors carry position info") {
    CHECK_THROWS_AS(Expression::parse("2 +"), ContractError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), ContractError);
    CHECK_THROWS_AS(Expression::parse("max(1)"), ContractError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), ContractError);
    CHECK_THROWS_AS(Expression::parse("1 2"), ContractError);
}
