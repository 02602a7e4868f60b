#include <doctest.h>

#include "zk/parse.hpp"
#include "zk/numeric.hpp"

#include <random>

using namespace zk;

TEST_CASE("plain evaluation") {
    NumericAssignment a;
    a.symbols["x"] = 3.0;
    CHECK(eval_numeric(parse("x^2"), a) == doctest::Approx(9.0));

    NumericAssignment b;
    b.symbols["t"] = 2.0;
    b.funcs["f"] = {0, 0, 1};  // f = t^2
    CHECK(eval_numeric(parse("f(t)*f'"), b) == doctest::Approx(16.0));
    CHECK(eval_numeric(parse("f''"), b) == doctest::Approx(2.0));
}

TEST_CASE("quadrature against a known antiderivative") {
    NumericAssignment a;
    a.symbols["t"] = 2.0;
    a.funcs["f"] = {0, 1};  // f = t
    // Int(f^2, t) from 1 to 2 = 7/3
    CHECK(eval_numeric(parse("Int(f(t)^2, t)"), a) == doctest::Approx(7.0 / 3).epsilon(1e-10));
    // exp/log atoms
    a.symbols["x"] = 0.7;
    CHECK(eval_numeric(parse("exp(x)"), a) == doctest::Approx(std::exp(0.7)));
    CHECK(eval_numeric(parse("ln(x)"), a) == doctest::Approx(std::log(0.7)));
}

TEST_CASE("singular samples raise instead of poisoning results") {
    NumericAssignment a;
    a.symbols["z"] = 0.0;
    CHECK_THROWS_AS(eval_numeric(parse("1/z"), a), SingularSample);
    a.symbols["q"] = -1.0;
    CHECK_THROWS_AS(eval_numeric(pow(sym("q"), Rational(1, 2)), a), SingularSample);
    CHECK(eval_numeric(pow(sym("q"), Rational(1, 3)), a) == doctest::Approx(-1.0));
}

TEST_CASE("complex evaluation uses principal branches") {
    NumericAssignment a;
    a.symbols["q"] = -4.0;
    std::complex<double> r = eval_complex(pow(sym("q"), Rational(1, 2)), a);
    CHECK(std::abs(r - std::complex<double>(0, 2)) < 1e-12);
}

TEST_CASE("soundness of the symbolic zero test against random numerics") {
    // expressions that normalize to zero evaluate below tolerance at random
    // non-singular assignments
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> small(-2, 2);
    int done = 0;
    for (int i = 0; i < 200; ++i) {
        Expr a = add(mul(num(small(rng)), sym("x")), func("f", 0, sym("t")));
        Expr b = add(num(small(rng)), mul(num(small(rng)), jet("u", {"x"})));
        Expr c = add(integral(func("g", 0, sym("t")), "t"), mul(num(small(rng)), sym("y")));
        Expr zero_by_algebra =
            sub(mul(add(a, b), c), add(mul(a, c), mul(b, c)));
        REQUIRE(is_zero_strict(zero_by_algebra));
        NumericCheck nc = numeric_zero_check(zero_by_algebra, 1000 + i, 1, 5, 1e-9);
        CHECK(nc.pass);
        ++done;
    }
    CHECK(done == 200);
}

TEST_CASE("integrability condition survives an independent numeric spot-check first") {
    // oracle first: substitute the constraint numerically at 20 random points
    // before trusting the symbolic pipeline with it
    Expr t = sym("t");
    Expr f = func("f", 0, t), f1 = func("f", 1, t), f2 = func("f", 2, t);
    Expr h = func("h", 0, t), h1 = func("h", 1, t), h2 = func("h", 2, t);
    Expr cond = add({mul(num(3), f, pow(h1, 2)), mul(num(2), pow(h, 2), f2),
                     mul(num(-3), h, add(mul(f1, h1), mul(f, h2)))});
    Bindings bh;
    bh.funcs["h"] = {
        "t",
        mul(param("Ch"), pow(mul(pow(f, 2), expe(neg(integral(div(param("K"), f), "t")))),
                             Rational(1, 3)))};
    Expr substituted = substitute(cond, bh);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> tv(0.5, 1.8);
    std::uniform_real_distribution<double> kv(-1.5, 1.5);
    int checked = 0;
    while (checked < 50) {
        NumericAssignment a;
        a.funcs["f"] = random_poly(rng);
        a.symbols["t"] = tv(rng);
        a.symbols["K"] = kv(rng);
        a.symbols["Ch"] = kv(rng) + 2.0;
        try {
            double v = eval_numeric(substituted, a);
            double scale = std::max(1.0, eval_scale(normalize(substituted), a));
            CHECK(std::fabs(v) / scale < 1e-9);
            ++checked;
        } catch (const SingularSample&) {
            continue;
        }
    }
    // only now assert the symbolic pipeline agrees
    CHECK(is_zero_strict(substituted));
}

TEST_CASE("abstention falls back to numerics and can still certify") {
    // monomial radicands stay exponent arithmetic and need no atom at all
    CHECK(is_zero_strict(sub(pow(mul(num(4), sym("z")), Rational(1, 2)),
                             mul(num(2), pow(sym("z"), Rational(1, 2))))));
    // composite radicands with distinct defining relations abstain; the
    // numeric protocol decides (sqrt(4z+4) = 2 sqrt(z+1))
    Expr d = sub(pow(parse("4*z + 4"), Rational(1, 2)),
                 mul(num(2), pow(parse("z + 1"), Rational(1, 2))));
    CHECK(is_zero(d) == ZeroStatus::Unknown);
    NumericCheck nc = numeric_zero_check(d, 61);
    CHECK(nc.pass);
    // and a genuinely nonzero abstention case is rejected numerically
    Expr d2 = sub(pow(parse("4*z + 4"), Rational(1, 2)), pow(parse("z + 1"), Rational(1, 2)));
    CHECK(is_zero(d2) == ZeroStatus::Unknown);
    CHECK(!numeric_zero_check(d2, 62).pass);
}
