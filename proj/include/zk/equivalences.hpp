#pragma once

// Equivalence transformations between the reduced ODEs, their symmetry
// algebras, and the rectification chain down to the implicit cubic solution.
// Parameter identities are checked exactly in the rational field extended by
// the algebraic atom sqrt(21).

#include "zk/reductions.hpp"

namespace zk {

// one-variable reduced equations as expressions over z, w-jets
namespace odes {

inline Expr w0() { return jet("w", {}); }
inline Expr w1() { return jet("w", {"z"}); }
inline Expr w2() { return jet("w", {"z", "z"}); }

// w'^2 + w w'' + (A z + B) w' + 2 A w - (1/3)(A z + B)^2
inline Expr zhu2() {
    Expr A = param("A"), B = param("B"), z = sym("z");
    Expr lin = add(mul(A, z), B);
    return add({pow(w1(), 2), mul(w0(), w2()), mul(lin, w1()), mul(num(2), A, w0()),
                neg(mul(frac(1, 3), pow(lin, 2)))});
}

// w'^2 + w w'' + A y w' + 2 A w - (1/3)(A y)^2   (same jet letters, variable y)
inline Expr zhu2b() {
    Expr A = param("A"), yv = sym("y");
    return add({pow(w1(), 2), mul(w0(), w2()), mul(A, yv, w1()), mul(num(2), A, w0()),
                neg(mul(frac(1, 3), pow(mul(A, yv), 2)))});
}

// -B^2/3 + B w' + w'^2 + w w''
inline Expr zhuA0() {
    Expr B = param("B");
    return add({neg(div(pow(B, 2), num(3))), mul(B, w1()), pow(w1(), 2), mul(w0(), w2())});
}

// 12 w - 12 z w' + w'^2 + (w + 24 z^2) w''
inline Expr red03() {
    Expr z = sym("z");
    return add({mul(num(12), w0()), mul(num(-12), z, w1()), pow(w1(), 2),
                mul(add(w0(), mul(num(24), pow(z, 2))), w2())});
}

// K^2 + 90 K w' + 1296 w'^2 + 36 (36 w + K z) w''
inline Expr red23() {
    Expr K = param("K"), z = sym("z");
    return add({pow(K, 2), mul(num(90), K, w1()), mul(num(1296), pow(w1(), 2)),
                mul(num(36), add(mul(num(36), w0()), mul(K, z)), w2())});
}

// w'^2 + w w''
inline Expr red230() { return add(pow(w1(), 2), mul(w0(), w2())); }

// 9 z^{4/3} w'' + 6 z^{1/3} w' + K^2/9
inline Expr red13() {
    Expr K = param("K"), z = sym("z");
    return add({mul(num(9), pow(z, Rational(4, 3)), w2()),
                mul(num(6), pow(z, Rational(1, 3)), w1()), div(pow(K, 2), num(9))});
}

}  // namespace odes

inline Expr sqrt21() { return algebraic(2, num(21), "sqrt21"); }

// equality up to a nonzero rational constant factor
inline bool equal_up_to_constant(const Expr& a, const Expr& b, Rational* factor = nullptr) {
    NormalForm na = normalize(a), nb = normalize(b);
    if (na.is_zero() || nb.is_zero()) return na.is_zero() == nb.is_zero();
    if (!(na.num.begin()->first == nb.num.begin()->first)) return false;
    Rational c = na.num.begin()->second / nb.num.begin()->second;
    if (factor) *factor = c;
    return is_zero_strict(sub(a, mul(num(c), b)));
}

// ---- zhu2 -> zhu2b -------------------------------------------------------------------

inline CheckResult check_zhu2_to_zhu2b() {
    Stopwatch sw;
    Bindings b;
    b.symbols["z"] = sub(sym("y"), div(param("B"), param("A")));
    Expr mapped = substitute(odes::zhu2(), b);
    CheckResult r = CheckResult::pass("equiv.zhu2-to-zhu2b",
                                      "z = y - B/A maps zhu2 onto zhu2b (A != 0)");
    if (!is_zero_strict(sub(mapped, odes::zhu2b()))) {
        r.status = Status::Fail;
        r.residual = nf_to_string(normalize(sub(mapped, odes::zhu2b())));
    }
    r.ms = sw.ms();
    return r;
}

// ---- red23 -> B-form -------------------------------------------------------------------

// Pull red23 through v = K m (36 w + K z), y = -K z / 36 (new dependent v(y)):
// w = v/(36 K m) + y,  w' = (v'/(36Km) + 1)(-K/36),  w'' = K v''/(46656 m).
inline Expr red23_transformed(const Expr& m) {
    Expr K = param("K"), yv = sym("y");
    Expr v0 = jet("v", {}), v1 = jet("v", {"y"}), v2 = jet("v", {"y", "y"});
    Expr km = mul(K, m);
    Bindings b;
    b.symbols["z"] = div(mul(num(-36), yv), K);
    b.jets["w"] = add(div(v0, mul(num(36), km)), yv);
    b.jets["w_z"] = mul(add(div(v1, mul(num(36), km)), num(1)), div(K, num(-36)));
    b.jets["w_zz"] = div(mul(K, v2), mul(num(46656), m));
    return substitute(odes::red23(), b);
}

inline std::vector<CheckResult> check_red23_to_bform() {
    std::vector<CheckResult> out;
    Expr s = sqrt21();
    Expr m = div(add(num(-35), mul(num(3), s)), num(36288));
    Expr B = div(mul(add(num(-9), mul(num(5), s)), param("K")), num(672));
    Expr K = param("K");
    Expr v0 = jet("v", {}), v1 = jet("v", {"y"}), v2 = jet("v", {"y", "y"});
    {
        // the printed claim, checked faithfully: transformed red23 should match
        // -B^2/3 + B v' + v'^2 + v v'' up to a nonzero factor
        Stopwatch sw;
        Expr got = red23_transformed(m);
        Expr target = add({neg(div(pow(B, 2), num(3))), mul(B, v1), pow(v1, 2), mul(v0, v2)});
        // match on the leading jet v'' (linear on both sides)
        NormalForm gn = normalize(got), tn = normalize(target);
        auto gb = collect(gn, v2);
        auto tb = collect(tn, v2);
        CheckResult r = CheckResult::pass(
            "equiv.red23-to-bform",
            "v = K m (36w + Kz), y = -Kz/36 with m = (-35+3sqrt21)/36288, B = (-9+5sqrt21)K/672");
        Expr cg = nf_to_expr(gb.count(Rational(1)) ? gb[Rational(1)] : normalize(num(0)));
        Expr ct = nf_to_expr(tb.count(Rational(1)) ? tb[Rational(1)] : normalize(num(0)));
        Expr cross = sub(mul(got, ct), mul(target, cg));
        if (!is_zero_strict(cross)) {
            r.status = Status::Fail;
            r.residual = "cross-matching residual is nonzero";
            r.note("the claimed equivalence cannot hold: the transformed equation is "
                   "v'^2 + v v'' - 18Km v' - 648 K^2 m^2 = 0, whose invariant c/b^2 = -2, "
                   "while every B-form has c/b^2 = -1/3");
            r.note("no parameter pair (m, B) repairs this; red23 and zhuA0 are inequivalent "
                   "under point transformations (their first-integral exponents differ)");
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    {
        // the engine-derived true image of red23 under the printed change
        Stopwatch sw;
        Expr got = red23_transformed(m);
        Expr km = mul(K, m);
        Expr derived = add({pow(v1, 2), mul(v0, v2), mul(num(-18), km, v1),
                            mul(num(-648), pow(km, 2))});
        CheckResult r = CheckResult::pass(
            "equiv.red23-transformed-derived",
            "transformed red23 equals v'^2 + v v'' - 18Km v' - 648K^2m^2 exactly (sqrt21 extension)");
        NormalForm gn = normalize(got);
        auto gb = collect(gn, v2);
        Expr cg = nf_to_expr(gb[Rational(1)]);
        NormalForm dn = normalize(derived);
        auto db = collect(dn, v2);
        Expr cd = nf_to_expr(db[Rational(1)]);
        if (!is_zero_strict(sub(mul(got, cd), mul(derived, cg)))) {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(sub(mul(got, cd), mul(derived, cg))));
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    return out;
}

// red23 at K = 0 is red230 is zhuA0 at B = 0
inline CheckResult check_k0_b0_coincidences() {
    Stopwatch sw;
    Bindings bk;
    bk.symbols["K"] = num(0);
    Expr a = substitute(odes::red23(), bk);
    Bindings bb;
    bb.symbols["B"] = num(0);
    Expr c = substitute(odes::zhuA0(), bb);
    CheckResult r = CheckResult::pass("equiv.k0-b0", "red23|_{K=0} = red230 = zhuA0|_{B=0}");
    Rational f1, f2;
    if (!equal_up_to_constant(a, odes::red230(), &f1)) {
        r.status = Status::Fail;
        r.residual = "red23|_{K=0} != red230";
    } else if (!equal_up_to_constant(c, odes::red230(), &f2)) {
        r.status = Status::Fail;
        r.residual = "zhuA0|_{B=0} != red230";
    } else {
        r.note("factors " + f1.to_string() + " and " + f2.to_string());
    }
    r.ms = sw.ms();
    return r;
}

// ---- reduced-ODE symmetries ---------------------------------------------------------

inline JetEquation ode_jet_equation(const Expr& delta, const Expr& leading, const Expr& rhs) {
    JetEquation eq;
    eq.space = {{"z"}, "w", 2};
    eq.delta = delta;
    eq.leading = leading;
    eq.rhs = rhs;
    return eq;
}

inline std::vector<CheckResult> verify_ode_symmetries(uint64_t seed = 42) {
    std::vector<CheckResult> out;
    Expr z = sym("z");
    Expr w0 = odes::w0(), w1 = odes::w1(), w2 = odes::w2();
    {
        // red03: v = z d_z + 2 w d_w
        JetEquation eq = ode_jet_equation(
            odes::red03(), w2,
            neg(div(add({mul(num(12), w0), mul(num(-12), z, w1), pow(w1, 2)}),
                    add(w0, mul(num(24), pow(z, 2))))));
        VectorField v;
        v.xi["z"] = z;
        v.phi = mul(num(2), w0);
        out.push_back(is_symmetry(v, eq, "odesym.red03", "z d_z + 2w d_w on red03", seed));
    }
    {
        // zhuA0: d_z and z d_z + w d_w
        Expr B = param("B");
        JetEquation eq = ode_jet_equation(
            odes::zhuA0(), w2,
            div(sub(div(pow(B, 2), num(3)), add(mul(B, w1), pow(w1, 2))), w0));
        VectorField v1;
        v1.xi["z"] = num(1);
        v1.phi = num(0);
        out.push_back(is_symmetry(v1, eq, "odesym.zhuA0.translation", "d_z on zhuA0", seed));
        VectorField v2;
        v2.xi["z"] = z;
        v2.phi = w0;
        out.push_back(is_symmetry(v2, eq, "odesym.zhuA0.scaling", "z d_z + w d_w on zhuA0", seed));
    }
    {
        // red23: v1 = (-36/K) d_z + d_w and v2 = z d_z + w d_w; [v1, v2] = v1
        Expr K = param("K");
        JetEquation eq = ode_jet_equation(
            odes::red23(), w2,
            neg(div(add({pow(K, 2), mul(num(90), K, w1), mul(num(1296), pow(w1, 2))}),
                    mul(num(36), add(mul(num(36), w0), mul(K, z))))));
        VectorField v1;
        v1.xi["z"] = div(num(-36), K);
        v1.phi = num(1);
        VectorField v2;
        v2.xi["z"] = z;
        v2.phi = w0;
        out.push_back(is_symmetry(v1, eq, "odesym.red23.v1", "(-36/K) d_z + d_w on red23", seed));
        out.push_back(is_symmetry(v2, eq, "odesym.red23.v2", "z d_z + w d_w on red23", seed));
        // solvable bracket
        JetSpace js{{"z"}, "w", 2};
        VectorField br = commutator(v1, v2, js);
        CheckResult r = CheckResult::pass("odesym.red23.bracket", "[v1, v2] = v1");
        if (!is_zero_strict(sub(br.coeff("z"), v1.coeff("z"))) ||
            !is_zero_strict(sub(br.phi, v1.phi))) {
            r.status = Status::Fail;
            r.residual = "bracket mismatch";
        }
        out.push_back(r);
    }
    return out;
}

// ---- the solvable chain ----------------------------------------------------------------

// step (i): the rectifying change y = 36 w + K z, r = -K z/36, H = dr/dy maps
// red23 onto -H + 18 H^2 + 648 H^3 + y H' = 0.
inline CheckResult chain_step_rectify() {
    Stopwatch sw;
    Expr K = param("K"), yv = sym("y");
    Expr H0 = jet("H", {}), H1 = jet("H", {"y"});
    // w enters red23 only through 36 w + K z, which the change maps to y,
    // so substituting w = (y - K z)/36 cancels every z
    Expr wz = mul(div(neg(K), num(36)), div(add(num(1), mul(num(36), H0)), mul(num(36), H0)));
    Expr wzz = neg(div(mul(pow(K, 2), H1), mul(num(46656), pow(H0, 3))));
    Bindings bb;
    bb.jets["w_z"] = wz;
    bb.jets["w_zz"] = wzz;
    bb.jets["w"] = div(sub(yv, mul(K, sym("z"))), num(36));
    Expr got = substitute(odes::red23(), bb);
    Expr target = add({neg(H0), mul(num(18), pow(H0, 2)), mul(num(648), pow(H0, 3)),
                       mul(yv, H1)});
    CheckResult r = CheckResult::pass("chain.rectify", "red23 -> -H + 18H^2 + 648H^3 + yH' = 0");
    // match up to the factor -K^2/(1296 H^3)
    NormalForm gn = normalize(got), tn = normalize(target);
    auto gb = collect(gn, H1);
    auto tb = collect(tn, H1);
    if (!gb.count(Rational(1)) || !tb.count(Rational(1))) {
        r.status = Status::Fail;
        r.residual = "H' coefficient missing";
    } else {
        Expr cg = nf_to_expr(gb[Rational(1)]);
        Expr ct = nf_to_expr(tb[Rational(1)]);
        if (!is_zero_strict(sub(mul(got, ct), mul(target, cg)))) {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(sub(mul(got, ct), mul(target, cg))));
        }
    }
    r.note("printed r = -(Kx)/36 read as -(Kz)/36 (x is not a variable of red23)");
    r.ms = sw.ms();
    return r;
}

// step (ii): the rectified generator H/((1+18H)^{1/3}(36H-1)^{2/3}) d_y is a
// symmetry of the H-equation.
inline CheckResult chain_step_symmetry(uint64_t seed = 42) {
    Expr yv = sym("y");
    Expr H0 = jet("H", {}), H1 = jet("H", {"y"});
    JetEquation eq;
    eq.space = {{"y"}, "H", 1};
    eq.delta = add({neg(H0), mul(num(18), pow(H0, 2)), mul(num(648), pow(H0, 3)), mul(yv, H1)});
    eq.leading = H1;
    eq.rhs = div(sub(H0, add(mul(num(18), pow(H0, 2)), mul(num(648), pow(H0, 3)))), yv);
    VectorField v;
    v.xi["y"] = mul(H0, pow(add(num(1), mul(num(18), H0)), Rational(-1, 3)),
                    pow(sub(mul(num(36), H0), num(1)), Rational(-2, 3)));
    v.phi = num(0);
    return is_symmetry(v, eq, "chain.symmetry",
                       "H (1+18H)^{-1/3} (36H-1)^{-2/3} d_y is a symmetry of the H-equation", seed);
}

// step (iii): S = (1+18H)^{1/3} (36H-1)^{2/3} y / H is a first integral, and in
// the rectifying coordinates (xi = H, S) the equation becomes (factor) * S' = 0
// with the printed factor xi^3 (1+18 xi)^{5/3} (36 xi - 1)^{4/3}.
inline std::vector<CheckResult> chain_step_first_integral() {
    std::vector<CheckResult> out;
    Expr yv = sym("y");
    Expr H0 = jet("H", {}), H1 = jet("H", {"y"});
    Expr S = mul(pow(add(num(1), mul(num(18), H0)), Rational(1, 3)),
                 pow(sub(mul(num(36), H0), num(1)), Rational(2, 3)), yv, pow(H0, Rational(-1)));
    {
        Stopwatch sw;
        JetSpace js{{"y"}, "H", 1};
        Expr dS = total_derivative(S, "y", js);
        Bindings shell;
        shell.jets["H_y"] = div(sub(H0, add(mul(num(18), pow(H0, 2)), mul(num(648), pow(H0, 3)))), yv);
        Expr on_shell = substitute(dS, shell);
        CheckResult r = CheckResult::pass("chain.first-integral", "S' = 0 along solutions");
        if (!is_zero_strict(on_shell)) {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(on_shell));
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    {
        // hodograph form: y(H) with y = S(H) Phi(H), Phi = H (1+18H)^{-1/3}(36H-1)^{-2/3};
        // the equation y - C y_H = 0 (C = H - 18H^2 - 648H^3) becomes F * S' = 0
        Stopwatch sw;
        Expr Hs = sym("H");
        Expr S0 = jet("S", {}), S1 = jet("S", {"H"});
        Expr Phi = mul(Hs, pow(add(num(1), mul(num(18), Hs)), Rational(-1, 3)),
                       pow(sub(mul(num(36), Hs), num(1)), Rational(-2, 3)));
        Expr C = sub(Hs, add(mul(num(18), pow(Hs, 2)), mul(num(648), pow(Hs, 3))));
        Expr lhs = sub(mul(S0, Phi), mul(C, add(mul(S1, Phi), mul(S0, partial_diff(Phi, Hs)))));
        // S-coefficient must vanish identically; S'-coefficient is the factor
        NormalForm ln = normalize(lhs);
        auto bS = collect(ln, S0);
        auto bS1 = collect(ln, S1);
        CheckResult r = CheckResult::pass("chain.xi-equation",
                                          "rectified equation is (factor) * S' = 0");
        if (bS.count(Rational(1)) && !bS[Rational(1)].is_zero()) {
            r.status = Status::Fail;
            r.residual = "S-coefficient nonzero: " + nf_to_string(bS[Rational(1)]);
        } else if (!bS1.count(Rational(1))) {
            r.status = Status::Fail;
            r.residual = "no S' term";
        } else {
            Expr Fd = nf_to_expr(bS1[Rational(1)]);
            Expr Fp = mul(pow(Hs, 3), pow(add(num(1), mul(num(18), Hs)), Rational(5, 3)),
                          pow(sub(mul(num(36), Hs), num(1)), Rational(4, 3)));
            // printed factor = derived factor times H (1+18H)(36H-1)
            Expr q = mul(Hs, add(num(1), mul(num(18), Hs)), sub(mul(num(36), Hs), num(1)));
            if (!is_zero_strict(sub(Fp, mul(q, Fd)))) {
                r.status = Status::Fail;
                r.residual = "printed factor does not divide the derived one";
            } else {
                r.note("printed factor equals the derived factor times H(1+18H)(36H-1), "
                       "nonzero away from the singular roots");
            }
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    return out;
}

// step (iv): differentiate a H^3 - y^3 + 54 H y^3 - 23328 H^3 y^3 = 0
// implicitly and eliminate against the H-equation; the division must be exact.
inline CheckResult chain_step_implicit() {
    Stopwatch sw;
    Expr Hs = sym("H"), yv = sym("y"), a = param("a");
    Expr P = add({mul(a, pow(Hs, 3)), neg(pow(yv, 3)), mul(num(54), Hs, pow(yv, 3)),
                  mul(num(-23328), pow(Hs, 3), pow(yv, 3))});
    Expr Py = partial_diff(P, yv);
    Expr Ph = partial_diff(P, Hs);
    Expr C = add({neg(Hs), mul(num(18), pow(Hs, 2)), mul(num(648), pow(Hs, 3))});
    Expr R = sub(mul(C, Ph), mul(yv, Py));
    // long division of R by P in H over Q(y, a)
    auto coeffs = [&](const Expr& e) {
        std::map<long long, NormalForm> by_deg;
        NormalForm nf = normalize(e);
        for (auto& [deg, c] : collect(nf, Hs)) by_deg[deg.num().to_ll()] = c;
        return by_deg;
    };
    auto rc = coeffs(R);
    auto pc = coeffs(P);
    long long dR = rc.empty() ? -1 : rc.rbegin()->first;
    long long dP = pc.rbegin()->first;
    Expr lcP = nf_to_expr(pc.at(dP));
    Expr rem = R;
    Expr quotient = num(0);
    while (dR >= dP) {
        auto rcc = coeffs(rem);
        auto it = rcc.find(dR);
        if (it == rcc.end()) break;
        Expr lead = nf_to_expr(it->second);
        Expr qterm = mul(div(lead, lcP), pow(Hs, Rational(dR - dP)));
        quotient = add(quotient, qterm);
        rem = sub(rem, mul(qterm, P));
        auto rc2 = coeffs(rem);
        long long nd = -1;
        for (auto& [d, c] : rc2)
            if (!c.is_zero()) nd = std::max(nd, d);
        if (nd >= dR) break;  // no progress
        dR = nd;
    }
    CheckResult r = CheckResult::pass("chain.implicit",
                                      "implicit differentiation of poly3 reproduces the H-equation "
                                      "with zero pseudo-remainder");
    if (!is_zero_strict(rem)) {
        r.status = Status::Fail;
        r.residual = nf_to_string(normalize(rem));
    } else {
        r.note("division exact; the eliminant is a polynomial multiple of poly3");
    }
    r.ms = sw.ms();
    return r;
}

// step (v): the displayed Cardano root F(y) satisfies poly3 numerically
// (complex principal branches; the radicand goes negative on the sample range).
inline CheckResult chain_step_root_numeric(uint64_t seed = 42) {
    Stopwatch sw;
    Expr yv = sym("y"), a = param("a");
    Expr X = sub(a, mul(num(23328), pow(yv, 3)));
    Expr inner = add(mul(pow(yv, 3), pow(X, 2)),
                     pow(mul(a, pow(yv, 6), pow(X, 3)), Rational(1, 2)));
    Expr F = div(add({mul(num(-36), a, pow(yv, 3)), mul(num(839808), pow(yv, 6)),
                      mul(pow(num(2), Rational(1, 3)), pow(inner, Rational(2, 3)))}),
                 mul(pow(num(2), Rational(2, 3)), X, pow(inner, Rational(1, 3))));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> yu(0.1, 2.0);
    CheckResult r = CheckResult::pass("chain.root",
                                      "displayed root F(y) satisfies poly3 to 1e-8 (complex branches)");
    r.mode = "numeric";
    double worst = 0;
    int taken = 0, guard = 0;
    while (taken < 30) {
        if (++guard > 600) {
            r.status = Status::Fail;
            r.residual = "too many singular samples";
            break;
        }
        NumericAssignment as;
        as.symbols["a"] = 1.0;
        as.symbols["y"] = yu(rng);
        try {
            double Xv = eval_numeric(X, as);
            if (std::fabs(Xv) < 1e-3) continue;
            std::complex<double> Fv = eval_complex(F, as);
            double yv3 = std::pow(as.symbols["y"], 3);
            std::complex<double> H = Fv;
            std::complex<double> p3 =
                1.0 * H * H * H + (-yv3) + 54.0 * H * yv3 + (-23328.0) * H * H * H * yv3;
            // scale by the term magnitudes
            double scale = std::abs(H * H * H) + yv3 + std::abs(54.0 * H * yv3) +
                           std::abs(23328.0 * H * H * H * yv3);
            scale = std::max(scale, 1.0);
            worst = std::max(worst, std::abs(p3) / scale);
            ++taken;
        } catch (const SingularSample&) {
            continue;
        }
    }
    r.max_rel = worst;
    if (worst > 1e-8) {
        r.status = Status::Fail;
        r.residual = "max relative |poly3(F)| = " + std::to_string(worst);
    }
    r.ms = sw.ms();
    return r;
}

// transform-composition invariant: deriving the S-equation through the
// composed chain equals the direct derivation (both reduce to the same factor)
inline CheckResult chain_composition() {
    Stopwatch sw;
    CheckResult a = chain_step_rectify();
    auto b = chain_step_first_integral();
    CheckResult r = CheckResult::pass("chain.composition",
                                      "composed chain checks agree with the direct ones");
    if (!a.ok() || !b[0].ok() || !b[1].ok()) {
        r.status = Status::Fail;
        r.residual = "a chain step fails";
    }
    r.ms = sw.ms();
    return r;
}

inline std::vector<CheckResult> verify_solvable_chain(uint64_t seed = 42) {
    std::vector<CheckResult> out;
    out.push_back(chain_step_rectify());
    out.push_back(chain_step_symmetry(seed));
    for (auto& r : chain_step_first_integral()) out.push_back(r);
    out.push_back(chain_step_implicit());
    out.push_back(chain_step_root_numeric(seed));
    return out;
}

}  // namespace zk
