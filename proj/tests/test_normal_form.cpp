#include <doctest.h>

#include "zk/parse.hpp"
#include "zk/normal_form.hpp"

#include <random>

using namespace zk;

TEST_CASE("expansion identities normalize to the empty sum") {
    CHECK(is_zero_strict(parse("(x+y)^2 - x^2 - 2*x*y - y^2")));
    CHECK(is_zero_strict(parse("f(t)^(2/3)*f(t)^(1/3) - f(t)")));
    CHECK(is_zero_strict(parse("(x + y)^3 - x^3 - 3*x^2*y - 3*x*y^2 - y^3")));
}

TEST_CASE("fractions with polynomial denominators") {
    CHECK(is_zero_strict(parse("1/(t+1) - (t+2)/((t+1)*(t+2))")));
    CHECK(is_zero_strict(parse("(2 + t^2)/(4 + 2*t^2) - 1/2")));
    // non-monic denominators scale exactly
    CHECK(is_zero_strict(parse("1/(2 + t^2) + 1/(2 + t^2) - 2/(2 + t^2)")));
    CHECK(is_zero_strict(parse("t/(2*t + 2*t^3) - 1/(2 + 2*t^2)")));
}

TEST_CASE("exponential atoms merge along rational rays") {
    CHECK(is_zero_strict(parse("exp(2*k1*t) - exp(k1*t)^2")));
    CHECK(is_zero_strict(parse("exp(k1*t)*exp(-k1*t) - 1")));
    CHECK(is_zero_strict(parse("(exp(Int(K/f(t), t))^(1/3))^3 - exp(Int(K/f(t), t))")));
    CHECK(is_zero(parse("exp(k1*t) - exp(k2*t)")) != ZeroStatus::Zero);
}

TEST_CASE("algebraic atoms reduce modulo their relation") {
    Expr R = algebraic(2, parse("2*z - alpha"));
    CHECK(is_zero_strict(sub(pow(R, 3), mul(parse("2*z - alpha"), R))));
    CHECK(is_zero_strict(sub(pow(R, 2), parse("2*z - alpha"))));
    // negative powers pick up the relation in the denominator
    CHECK(is_zero_strict(sub(pow(R, -1), div(R, parse("2*z - alpha")))));

    Expr s21 = algebraic(2, num(21));
    CHECK(is_zero_strict(sub(pow(s21, 2), num(21))));
    // exact arithmetic in the quadratic extension
    Expr m = div(add(num(-35), mul(num(3), s21)), num(36288));
    Expr m_sq = div(add(num(707), mul(num(-105), s21)), num(658409472));
    CHECK(is_zero_strict(sub(pow(m, 2), m_sq)));
}

TEST_CASE("fractional powers of composite expressions become algebraic atoms") {
    NormalForm f = normalize(pow(parse("2*z - alpha"), Rational(1, 2)));
    std::vector<Expr> atoms;
    CHECK(count_distinct_algebraic(f, &atoms) == 1);
    CHECK(atoms[0]->root_n == 2);
}

TEST_CASE("zero status: sound zeros, conclusive nonzeros, abstention") {
    CHECK(is_zero(parse("x + 1")) == ZeroStatus::NonZero);
    // one pure-rational irreducible extension stays conclusive
    Expr s21 = algebraic(2, num(21));
    CHECK(is_zero(add(s21, num(1))) == ZeroStatus::NonZero);
    // interacting composite radicals abstain rather than claim nonzero
    Expr a = pow(parse("1 + 18*H"), Rational(1, 3));
    Expr b = pow(parse("36*H - 1"), Rational(2, 3));
    CHECK(is_zero(add(a, b)) == ZeroStatus::Unknown);
}

TEST_CASE("rational constant roots split into exact part and atom") {
    // 8^(1/3) = 2 exactly; (-8)^(1/3) = -2; 2^(1/3) becomes an atom
    CHECK(is_zero_strict(sub(pow(num(8), Rational(1, 3)), num(2))));
    CHECK(is_zero_strict(sub(pow(num(-8), Rational(1, 3)), num(-2))));
    NormalForm f = normalize(pow(num(2), Rational(1, 3)));
    CHECK(count_distinct_algebraic(f) == 1);
    CHECK_THROWS_AS(normalize(pow(num(-4), Rational(1, 2))), NormalizeError);
}

TEST_CASE("collect extracts coefficients by atom degree") {
    Expr wz = jet("w", {"z"});
    NormalForm f = normalize(parse("3*w_z^2*t + w_z*x - 5"));
    auto buckets = collect(f, wz);
    CHECK(buckets.size() == 3);
    CHECK(is_zero_strict(sub(nf_to_expr(buckets[Rational(2)]), parse("3*t"))));
    CHECK(is_zero_strict(sub(nf_to_expr(buckets[Rational(1)]), parse("x"))));
}

TEST_CASE("division by a symbolic zero is reported") {
    CHECK_THROWS_AS(normalize(div(num(1), parse("x - x"))), NormalizeError);
}

TEST_CASE("random distributivity identities stay zero") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int i = 0; i < 60; ++i) {
        Expr a = add(mul(num(small(rng)), sym("x")), func("f", 0, sym("t")));
        Expr b = add(num(small(rng)), mul(num(small(rng)), sym("y")));
        Expr c = sub(pow(add(a, b), 2), add(pow(a, 2), add(mul(num(2), a, b), pow(b, 2))));
        CHECK(is_zero_strict(c));
    }
}
