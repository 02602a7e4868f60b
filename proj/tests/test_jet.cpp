#include <doctest.h>

#include "zk/parse.hpp"
#include "zk/algebra.hpp"

#include <random>

using namespace zk;

TEST_CASE("total derivatives") {
    JetSpace js = zk_space();
    Expr u = jet("u", {});
    CHECK(is_zero_strict(sub(total_derivative(pow(u, 2), "x", js), parse("2*u*u_x"))));
    CHECK(is_zero_strict(sub(total_derivative(jet("u", {"x"}), "t", js), parse("u_tx"))));
    // the inner term of the equation: D_x(u u_x) = u_x^2 + u u_xx
    CHECK(is_zero_strict(
        sub(total_derivative(mul(u, jet("u", {"x"})), "x", js), parse("u_x^2 + u*u_xx"))));
    JetSpace low{{"t", "x", "y"}, "u", 1};
    CHECK_THROWS_AS(total_derivative(parse("u_tx"), "x", low), JetOrderError);
}

TEST_CASE("total derivatives commute") {
    JetSpace js = zk_space();
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int i = 0; i < 20; ++i) {
        Expr e = add(mul(num(small(rng)), jet("u", {}), sym("x")),
                     mul(func("f", 0, sym("t")), jet("u", {"y"})));
        Expr a = total_derivative(total_derivative(e, "t", js), "y", js);
        Expr b = total_derivative(total_derivative(e, "y", js), "t", js);
        CHECK(is_zero_strict(sub(a, b)));
    }
}

TEST_CASE("second prolongation: hand-expanded coefficients") {
    JetSpace js = zk_space();
    // x-translation family: phi^x = phi^xx = phi^yy = 0 and phi^tx = -g' u_xx
    ProlongedField pg = prolong2(gen_x(opaque("g")), js);
    CHECK(is_zero_strict(pg.coeffs[{"x"}]));
    CHECK(is_zero_strict(pg.coeffs[{"x", "x"}]));
    CHECK(is_zero_strict(pg.coeffs[{"y", "y"}]));
    CHECK(is_zero_strict(sub(pg.coeffs[{"t", "x"}], parse("-g'*u_xx"))));

    // scaling field: phi^x vanishes
    ProlongedField pv = prolong2(gen_v0(), js);
    CHECK(is_zero_strict(pv.coeffs[{"x"}]));

    // d_u prolongs to zero everywhere above order 0
    VectorField du;
    du.xi["t"] = num(0);
    du.xi["x"] = num(0);
    du.xi["y"] = num(0);
    du.phi = num(1);
    ProlongedField pu = prolong2(du, js);
    for (auto& [J, c] : pu.coeffs)
        if (!J.empty()) CHECK(is_zero_strict(c));
}

TEST_CASE("prolongation: characteristic route equals the recursive route") {
    JetSpace js = zk_space();
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int i = 0; i < 6; ++i) {
        VectorField v;
        v.xi["t"] = mul(num(small(rng)), func("f", 0, sym("t")));
        v.xi["x"] = add(mul(num(small(rng)), sym("x")), mul(num(small(rng)), pow(sym("y"), 2)));
        v.xi["y"] = mul(num(small(rng)), sym("y"));
        v.phi = add(mul(num(small(rng)), jet("u", {})), mul(num(small(rng)), sym("x")));
        ProlongedField a = prolong2(v, js);
        ProlongedField b = prolong2_recursive(v, js);
        for (auto& [J, c] : a.coeffs) CHECK(is_zero_strict(sub(c, b.coeffs[J])));
    }
}

TEST_CASE("prolongation is linear in the field") {
    JetSpace js = zk_space();
    VectorField a = gen_x(opaque("g"));
    VectorField b = gen_y(opaque("h"));
    VectorField comb = vf_add(vf_scale(a, frac(2, 3)), vf_scale(b, num(-5)));
    ProlongedField pc = prolong2(comb, js);
    ProlongedField pa = prolong2(a, js);
    ProlongedField pb = prolong2(b, js);
    for (auto& [J, c] : pc.coeffs)
        CHECK(is_zero_strict(
            sub(c, add(mul(frac(2, 3), pa.coeffs[J]), mul(num(-5), pb.coeffs[J])))));
}

TEST_CASE("solved form consistency") {
    JetEquation eq = zk_equation();
    CHECK(eq.solved_form_consistent());
    JetEquation bad = eq;
    bad.rhs = parse("u_x^2 + u*u_xx");
    CHECK(!bad.solved_form_consistent());
}

TEST_CASE("symmetry criterion on the equation") {
    JetEquation eq = zk_equation();
    CHECK(is_symmetry(gen_v0(), eq, "t1", "").ok());
    CHECK(is_symmetry(gen_x(opaque("g")), eq, "t2", "").ok());
    CHECK(is_symmetry(gen_y(opaque("h")), eq, "t3", "").ok());
    CHECK(is_symmetry(gen_z(opaque("f")), eq, "t4", "").ok());

    VectorField du;
    du.xi["t"] = num(0);
    du.xi["x"] = num(0);
    du.xi["y"] = num(0);
    du.phi = num(1);
    CheckResult r = is_symmetry(du, eq, "t5", "");
    CHECK(r.status == Status::Fail);
    // residual is exactly -u_xx
    CHECK(r.residual == to_string(nf_to_expr(normalize(parse("-u_xx")))));

    // rescaling the field by a nonzero rational does not change the verdict
    CHECK(is_symmetry(vf_scale(gen_z(opaque("f")), frac(-7, 3)), eq, "t6", "").ok());
    CheckResult r2 = is_symmetry(vf_scale(du, num(4)), eq, "t7", "");
    CHECK(r2.status == Status::Fail);
}
