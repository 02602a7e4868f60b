#pragma once

// Similarity-reduction catalog and verification: joint invariance of the
// similarity variables, chain-rule reduction to the stated target equation
// with multiplier matching, integrability conditions, and exact solutions.
// Printed formulas that fail verification are repaired only through the
// recorded corrections policy (sign flips, the invariance-completion family),
// with both forms kept.

#include "zk/subalgebras.hpp"

namespace zk {

struct ReductionRecord {
    std::string id;
    std::string anchor;
    std::vector<CatalogGenerator> gens;
    // invariant coordinates, in argument order of w
    std::vector<std::pair<std::string, Expr>> invariants;
    Expr alpha = num(0);
    Expr beta = num(1);
    Expr target = num(0);  // over symbols r,z, jets of w, and coefficient atoms
    std::vector<Expr> printed_system;  // case 3a only
    std::vector<std::string> notes;
};

// ---- invariance -----------------------------------------------------------------

inline Expr vf_apply_base(const VectorField& v, const Expr& f) {
    JetSpace js = zk_space();
    return v.apply(f, js);
}

// Candidate corrections: per-term sign flips, and for monomial invariants the
// completion family obtained by adjusting the x-exponent.
inline std::vector<Expr> correction_candidates(const Expr& printed) {
    std::vector<Expr> out;
    if (printed->kind == Kind::Sum) {
        for (size_t i = 0; i < printed->args.size(); ++i) {
            std::vector<Expr> ts = printed->args;
            ts[i] = neg(ts[i]);
            out.push_back(add(ts));
        }
    }
    NormalForm nf = normalize(printed);
    if (nf.num.size() == 1 && nf.den.empty()) {
        // monomial c * prod atoms^e: drop the constant and scan x-exponents
        Mono m = nf.num.begin()->first;
        bool has_x = false;
        for (auto& [a, e] : m.f)
            if (a->kind == Kind::Symbol && a->name == "x") has_x = true;
        for (int bx = -2; bx <= 2; ++bx) {
            std::vector<Expr> fs;
            for (auto& [a, e] : m.f) {
                if (a->kind == Kind::Symbol && a->name == "x") continue;
                fs.push_back(pow(a, e));
            }
            if (bx != 0) fs.push_back(pow(sym("x"), Rational(bx)));
            if (fs.empty()) continue;
            Expr cand = mul(fs);
            (void)has_x;
            out.push_back(cand);
        }
    }
    return out;
}

struct InvarianceOutcome {
    CheckResult check;
    ReductionRecord record;  // possibly with a corrected invariant
};

inline bool invariant_holds(const ReductionRecord& rec, const Expr& inv) {
    for (auto& gspec : rec.gens) {
        VectorField v = gspec.field();
        if (!is_zero_strict(vf_apply_base(v, inv))) return false;
    }
    return true;
}

inline bool w_combination_holds(const ReductionRecord& rec) {
    Expr F = div(sub(jet("u", {}), rec.alpha), rec.beta);
    for (auto& gspec : rec.gens) {
        VectorField v = gspec.field();
        if (!is_zero_strict(vf_apply_base(v, F))) return false;
    }
    return true;
}

inline InvarianceOutcome verify_invariance(const ReductionRecord& rec) {
    Stopwatch sw;
    InvarianceOutcome out;
    out.record = rec;
    CheckResult r = CheckResult::pass("invariance." + rec.id, rec.anchor);
    for (size_t i = 0; i < rec.invariants.size(); ++i) {
        auto& [name, inv] = rec.invariants[i];
        if (invariant_holds(rec, inv)) continue;
        // corrections policy: search the printed form's neighborhood
        std::vector<Expr> passing;
        for (auto& cand : correction_candidates(inv)) {
            if (!invariant_holds(out.record, cand)) continue;
            bool fresh = true;
            for (auto& p : passing)
                if (is_zero_strict(sub(p, cand)) ||
                    (as_rational_constant(div(p, cand)) && true))
                    fresh = false;
            if (fresh) passing.push_back(cand);
        }
        if (passing.size() == 1) {
            r.status = Status::Corrected;
            r.note("invariant " + name + " corrected: printed " + to_string(inv) + " -> " +
                   to_string(passing[0]) + " (printed form fails: v*" + name + " != 0)");
            out.record.invariants[i].second = passing[0];
        } else {
            r.status = Status::Fail;
            r.residual = "invariance failure for " + name + " (" +
                         std::to_string(passing.size()) + " corrections found)";
            r.ms = sw.ms();
            out.check = r;
            return out;
        }
    }
    if (!w_combination_holds(out.record)) {
        r.status = Status::Fail;
        r.residual = "dependent-variable combination (u - alpha)/beta is not invariant";
    }
    for (auto& n : rec.notes) r.note(n);
    r.ms = sw.ms();
    out.check = r;
    return out;
}

// ---- reduction -------------------------------------------------------------------

inline Expr reduction_residual(const ReductionRecord& rec) {
    std::vector<Expr> args;
    std::vector<int> zeros;
    for (auto& [n, e] : rec.invariants) {
        args.push_back(e);
        zeros.push_back(0);
    }
    Expr W = funcN("w", zeros, args);
    Expr u_expr = add(rec.alpha, mul(rec.beta, W));
    return zk_residual_of(u_expr);
}

inline Expr substitute_target(const ReductionRecord& rec, const Expr& target) {
    Bindings b;
    std::vector<Expr> args;
    for (auto& [n, e] : rec.invariants) {
        b.symbols[n] = e;
        args.push_back(e);
    }
    // every w-jet in the target becomes the matching multi-argument atom
    for_each_node(target, [&](const Expr& n) {
        if (n->kind != Kind::Jet || n->dep != "w") return;
        std::vector<int> orders;
        for (auto& [nm, e] : rec.invariants) {
            int c = 0;
            for (auto& i : n->index)
                if (i == nm) ++c;
            orders.push_back(c);
        }
        b.jets[jet_key(n)] = funcN("w", orders, args);
    });
    return substitute(target, b);
}

inline std::optional<Expr> leading_w_atom(const ReductionRecord& rec, const Expr& target) {
    std::optional<std::vector<std::string>> best;
    for_each_node(target, [&](const Expr& n) {
        if (n->kind != Kind::Jet || n->dep != "w") return;
        if (!best || n->index.size() > best->size() ||
            (n->index.size() == best->size() && n->index < *best))
            best = n->index;
    });
    if (!best) return std::nullopt;
    std::vector<int> orders;
    std::vector<Expr> args;
    for (auto& [nm, e] : rec.invariants) {
        int c = 0;
        for (auto& i : *best)
            if (i == nm) ++c;
        orders.push_back(c);
        args.push_back(e);
    }
    return funcN("w", orders, args);
}

struct ReductionOutcome {
    CheckResult check;
    Expr multiplier = num(0);
    ReductionRecord record;  // with any target correction applied
};

namespace detail_reduction {

// residual == mu * target for a nonzero mu; leading-jet coefficient matching
// with the cross-multiplied zero test.
inline bool residual_matches(const ReductionRecord& rec, const Expr& residual, const Expr& target,
                             Expr& mu_out) {
    Expr tgt = substitute_target(rec, target);
    auto astar = leading_w_atom(rec, target);
    if (astar) {
        Expr atom = canonical_atom(*astar);
        NormalForm rn = normalize(residual);
        NormalForm tn = normalize(tgt);
        auto rb = collect(rn, atom);
        auto tb = collect(tn, atom);
        auto r1 = rb.find(Rational(1));
        auto t1 = tb.find(Rational(1));
        if (r1 == rb.end() || t1 == tb.end()) return false;
        Expr c_res = nf_to_expr(r1->second);
        Expr c_tgt = nf_to_expr(t1->second);
        if (is_zero(c_res) == ZeroStatus::Zero) return false;
        if (!is_zero_strict(sub(mul(residual, c_tgt), mul(tgt, c_res)))) return false;
        mu_out = div(c_res, c_tgt);
        return true;
    }
    // jet-free target: the residual must be a monomial multiple of it;
    // reconstruct the candidate multiplier from the leading terms (NF division
    // performs no polynomial cancellation)
    NormalForm rn = normalize(residual);
    NormalForm tn = normalize(tgt);
    if (rn.is_zero() || tn.is_zero()) return false;
    auto& [mr, cr] = *rn.num.begin();
    auto& [mt, ct] = *tn.num.begin();
    Expr ratio = mul(num(cr / ct), Normalizer::mono_to_expr(mr, Rational(1)),
                     pow(Normalizer::mono_to_expr(mt, Rational(1)), Rational(-1)));
    Expr mu = mul(ratio, div(Normalizer::den_to_expr(tn.den), Normalizer::den_to_expr(rn.den)));
    if (!is_zero_strict(sub(residual, mul(mu, tgt)))) return false;
    mu_out = mu;
    return true;
}

}  // namespace detail_reduction

inline ReductionOutcome verify_reduction(const ReductionRecord& rec) {
    Stopwatch sw;
    ReductionOutcome out;
    out.record = rec;
    CheckResult r = CheckResult::pass("reduction." + rec.id, rec.anchor);
    Expr residual = reduction_residual(rec);
    Expr mu = num(0);
    if (detail_reduction::residual_matches(rec, residual, rec.target, mu)) {
        out.multiplier = mu;
        r.note("multiplier " + to_string(nf_to_expr(normalize(mu))));
    } else {
        // corrections policy on the target (term sign flips)
        std::vector<std::pair<Expr, Expr>> passing;
        for (auto& cand : correction_candidates(rec.target)) {
            Expr mu2 = num(0);
            if (detail_reduction::residual_matches(rec, residual, cand, mu2)) {
                bool fresh = true;
                for (auto& [p, m] : passing)
                    if (is_zero_strict(sub(p, cand))) fresh = false;
                if (fresh) passing.emplace_back(cand, mu2);
            }
        }
        if (passing.size() == 1) {
            r.status = Status::Corrected;
            r.note("target corrected: printed " + to_string(rec.target) + " -> " +
                   to_string(passing[0].first));
            out.record.target = passing[0].first;
            out.multiplier = passing[0].second;
        } else {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(residual));
        }
    }
    r.ms = sw.ms();
    out.check = r;
    return out;
}

// ---- the catalog -------------------------------------------------------------------

inline CatalogGenerator cgen(Expr k0, Expr g, Expr h, Expr f) {
    CatalogGenerator r;
    r.k0 = std::move(k0);
    r.g = std::move(g);
    r.h = std::move(h);
    r.f = std::move(f);
    return r;
}

inline std::vector<ReductionRecord> reduction_catalog() {
    Expr t = sym("t"), x = sym("x"), y = sym("y");
    Expr k0 = param("k0"), K = param("K");
    Expr g = opaque("g"), g1 = opaque("g", 1), g2 = opaque("g", 2);
    Expr h = opaque("h"), h1 = opaque("h", 1), h2 = opaque("h", 2);
    Expr f = opaque("f"), f1 = opaque("f", 1), f2 = opaque("f", 2);
    Expr w0 = jet("w", {});
    Expr wr = jet("w", {"r"}), wz = jet("w", {"z"});
    Expr wrr = jet("w", {"r", "r"}), wrz = jet("w", {"r", "z"}), wzz = jet("w", {"z", "z"});
    Expr rs = sym("r"), zs = sym("z");
    std::vector<ReductionRecord> out;

    {
        ReductionRecord rec;
        rec.id = "L1.1";
        rec.anchor = "u = w(t,y), reduced to w_yy = 0";
        rec.gens = {cgen(num(0), num(1), num(0), num(0))};
        rec.invariants = {{"r", t}, {"z", y}};
        rec.target = wzz;
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "L1.2";
        rec.anchor = "u = w(t,x), reduced to -w_x^2 + w_tx - w w_xx = 0";
        rec.gens = {cgen(num(0), num(0), num(1), num(0))};
        rec.invariants = {{"r", t}, {"z", x}};
        rec.target = add({neg(pow(wz, 2)), wrz, neg(mul(w0, wzz))});
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "L1.3";
        rec.anchor = "u = x w(t,z); printed z = y^2/2; reduced equation redl13";
        rec.gens = {cgen(num(1), num(0), num(0), num(0))};
        rec.invariants = {{"r", t}, {"z", mul(frac(1, 2), pow(y, 2))}};
        rec.alpha = num(0);
        rec.beta = x;
        rec.target = add({wr, mul(num(-2), wz), neg(pow(sub(w0, mul(zs, wz)), 2)),
                          neg(mul(zs, wrz)), mul(num(-4), zs, wzz),
                          neg(mul(pow(zs, 2), w0, wzz))});
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "L1.4";
        rec.anchor = "u = x w(r,z), r = 2 k0 t - ln x, z = y^2/x; reduced equation l14";
        rec.gens = {cgen(k0, num(0), num(0), num(1))};
        rec.invariants = {{"r", sub(mul(num(2), k0, t), loge(x))}, {"z", div(pow(y, 2), x)}};
        rec.beta = x;
        rec.target = add({mul(num(2), wz), pow(add({neg(w0), wr, mul(zs, wz)}), 2),
                          mul(num(2), k0, add(wrr, mul(zs, wrz))), mul(num(4), zs, wzz),
                          mul(w0, add({neg(wr), wrr, mul(zs, add(mul(num(2), wrz), mul(zs, wzz)))})),
                          mul(num(-2), k0, wr)});
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "z1";
        rec.anchor = "u = w(x,y), reduced to w_x^2 + w w_xx + w_yy = 0";
        rec.gens = {cgen(num(0), num(0), num(0), num(1))};
        rec.invariants = {{"r", y}, {"z", x}};
        rec.target = add({pow(wz, 2), mul(w0, wzz), wrr});
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "case2a";
        rec.anchor = "u = (g'/g)(w - x), r = t, z = y; reduced to g'' + g' w_zz = 0";
        rec.gens = {cgen(num(0), g, num(0), num(0))};
        rec.invariants = {{"r", t}, {"z", y}};
        rec.alpha = neg(mul(div(g1, g), x));
        rec.beta = div(g1, g);
        rec.target = add(g2, mul(g1, wzz));
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "case2b";
        rec.anchor = "u = y^2 w(t,z) + g'/(2 k0), z = (x + g/(2 k0))/y^2; reduced equation redp2b";
        rec.gens = {cgen(k0, g, num(0), num(0))};
        rec.invariants = {{"r", t}, {"z", div(add(x, div(g, mul(num(2), k0))), pow(y, 2))}};
        rec.alpha = div(g1, mul(num(2), k0));
        rec.beta = pow(y, 2);
        rec.target = add({mul(num(-2), w0), mul(num(2), zs, wz), neg(pow(wz, 2)), wrz,
                          neg(mul(add(w0, mul(num(4), pow(zs, 2))), wzz))});
        rec.notes.push_back("printed alpha reads g'/(2a); a is undefined and k0 matches the derivation");
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "case3a";
        rec.anchor = "u = (w(t,z) - 2 y g' - y^2 h'')/(4h), z = x - (y/(2h))(g + y h'/2)";
        rec.gens = {cgen(num(0), g, mul(num(2), h), num(0))};
        rec.invariants = {
            {"r", t},
            {"z", sub(x, mul(div(y, mul(num(2), h)), add(g, mul(frac(1, 2), y, h1))))}};
        rec.alpha = div(add(mul(num(-2), y, g1), neg(mul(pow(y, 2), h2))), mul(num(4), h));
        rec.beta = pow(mul(num(4), h), Rational(-1));
        // derived reduced equation; the printed three-equation system is not
        // the similarity reduction (see notes)
        rec.target = add({mul(num(4), h, wrz), mul(num(-2), h1, wz), neg(pow(wz, 2)),
                          neg(mul(add(w0, div(pow(g, 2), h)), wzz)), mul(num(8), h, h2)});
        rec.printed_system = {add(mul(h1, wz), h2), wzz,
                              add({neg(pow(wz, 2)), mul(num(4), wrz), neg(mul(w0, wzz))})};
        rec.notes.push_back("generator parameterization: printed formulas are invariant under x_g + y_{2h}");
        rec.notes.push_back(
            "target derived by the engine; the printed system is recorded and its mismatch flagged");
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "case3b";
        rec.anchor = "u = (2h + k0 y)^2 w(t,z) + (k0 g' + 2(h + k0 y) h'')/(2 k0^2); redp3b";
        rec.gens = {cgen(k0, g, mul(num(2), h), num(0))};
        Expr denb = add(mul(num(2), h), mul(k0, y));
        rec.invariants = {
            {"r", t},
            {"z", mul(pow(denb, -2),
                      add(x, div(add(mul(k0, g), mul(num(2), add(h, mul(k0, y)), h1)),
                                 mul(num(2), pow(k0, 2)))))}};
        rec.alpha = div(add(mul(k0, g1), mul(num(2), add(h, mul(k0, y)), h2)),
                        mul(num(2), pow(k0, 2)));
        rec.beta = pow(denb, 2);
        rec.target = add({mul(num(-2), pow(k0, 2), w0), mul(num(2), pow(k0, 2), zs, wz),
                          neg(pow(wz, 2)), wrz,
                          neg(mul(add(w0, mul(num(4), pow(k0, 2), pow(zs, 2))), wzz))});
        rec.notes.push_back("generator parameterization: printed formulas are invariant under k0 v0 + x_g + y_{2h}");
        out.push_back(rec);
    }
    {
        // reduction by x_{g/6} + y_{h/3} + z_f: the printed case-4 invariants
        // are joint invariants of exactly this parameterization
        ReductionRecord rec;
        rec.id = "case4";
        rec.anchor = "case 4 invariants (r, z, w) with G = Int(h f^{-5/3}); reduced to redf";
        rec.gens = {cgen(num(0), div(g, num(6)), div(h, num(3)), f)};
        Expr G = integral(mul(h, pow(f, Rational(-5, 3))), "t");
        Expr I2 = integral(add({mul(g, pow(f, Rational(-4, 3))),
                                div(mul(G, h1), mul(num(3), pow(f, Rational(2, 3)))),
                                mul(frac(1, 9), pow(G, 2), f2)}),
                           "t");
        Expr rinv = mul(pow(f, Rational(-2, 3)), sub(y, mul(frac(1, 3), pow(f, Rational(2, 3)), G)));
        Expr zinv = add(mul(pow(mul(num(54), pow(f, Rational(4, 3))), Rational(-1)),
                            add({mul(num(54), x, f), mul(num(3), pow(f, Rational(2, 3)), h, G),
                                 mul(num(-9), y, add(h, mul(y, f1)))})),
                        mul(frac(1, 54), add(mul(num(-9), I2), mul(pow(G, 2), f1))));
        rec.invariants = {{"r", rinv}, {"z", zinv}};
        rec.alpha = div(sub(pow(add(h, mul(num(2), y, f1)), 2),
                            mul(num(6), f,
                                add({g, mul(num(2), x, f1), mul(y, add(h1, mul(y, f2)))}))),
                        mul(num(36), pow(f, 2)));
        rec.beta = pow(f, Rational(-2, 3));
        rec.target = add({pow(wz, 2), mul(w0, wzz), wrr});
        rec.notes.push_back(
            "printed generator x_g + y_h + z_f fails joint invariance; the formulas are exact "
            "invariants of x_{g/6} + y_{h/3} + z_f (a reparameterization, not a correction)");
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "v0-xg";
        rec.anchor = "u = g' y^2 (w(z) - x/(g y^2)), z = t; reduced to -2 w g' - g''/g = 0";
        rec.gens = {cgen(num(1), num(0), num(0), num(0)), cgen(num(0), g, num(0), num(0))};
        rec.invariants = {{"z", t}};
        rec.alpha = neg(mul(div(g1, g), x));
        rec.beta = mul(g1, pow(y, 2));
        rec.target = add(mul(num(-2), w0, g1), neg(div(g2, g)));
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "v0-yh";
        rec.anchor = "u = [(2x/h' - y^2/(2h)) w(z) - y^2/(2h)] h''/2, z = t; generalized Riccati";
        rec.gens = {cgen(num(1), num(0), num(0), num(0)), cgen(num(0), num(0), h, num(0))};
        rec.invariants = {{"z", t}};
        rec.alpha = neg(mul(div(pow(y, 2), mul(num(2), h)), div(h2, num(2))));
        rec.beta = mul(sub(div(mul(num(2), x), h1), div(pow(y, 2), mul(num(2), h))), div(h2, num(2)));
        // derived Riccati coefficients (the paper leaves alpha, beta, gamma unstated):
        // w' - (h''/h') w^2 + (h'''/h'' - h''/h' + h'/(2h)) w + h'/(2h) = 0
        Expr h3 = opaque("h", 3);
        rec.target = add({wz, neg(mul(div(h2, h1), pow(w0, 2))),
                          mul(add({div(h3, h2), neg(div(h2, h1)), div(h1, mul(num(2), h))}), w0),
                          div(h1, mul(num(2), h))});
        rec.notes.push_back("Riccati coefficients derived; the display leaves them unstated");
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "xg-yh";
        rec.anchor = "u = [w(z) - 2 h g' x + (g'h' - g h'') y^2/2]/(2hg), z = t; integrability condition";
        rec.gens = {cgen(num(0), g, num(0), num(0)), cgen(num(0), num(0), h, num(0))};
        rec.invariants = {{"z", t}};
        rec.alpha = div(add(mul(num(-2), h, g1, x),
                            mul(frac(1, 2), sub(mul(g1, h1), mul(g, h2)), pow(y, 2))),
                        mul(num(2), h, g));
        rec.beta = pow(mul(num(2), h, g), Rational(-1));
        // printed condition; the correct sign is recovered by the corrections policy
        rec.target = add({neg(mul(g1, h1)), mul(num(2), h, g2), neg(mul(g, h2))});
        out.push_back(rec);
    }
    {
        ReductionRecord rec;
        rec.id = "v0-zf";
        rec.anchor = "u = (y^2/(6f^2))[w(z) + (2/3)f'^2 - (2xf'/y^2 + f'')f], z = f x/y^2 - f'/6; red03";
        rec.gens = {cgen(num(1), num(0), num(0), num(0)), cgen(num(0), num(0), num(0), f)};
        rec.invariants = {{"z", sub(div(mul(f, x), pow(y, 2)), div(f1, num(6)))}};
        rec.alpha = sub(mul(div(pow(y, 2), mul(num(6), pow(f, 2))),
                            sub(mul(frac(2, 3), pow(f1, 2)), mul(f2, f))),
                        div(mul(x, f1), mul(num(3), f)));
        rec.beta = div(pow(y, 2), mul(num(6), pow(f, 2)));
        rec.target = add({mul(num(12), w0), mul(num(-12), zs, wz), pow(wz, 2),
                          mul(add(w0, mul(num(24), pow(zs, 2))), wzz)});
        out.push_back(rec);
    }
    {
        // constraint comp13 baked in: g = (f exp(Int(K/f)))^{1/3}
        ReductionRecord rec;
        rec.id = "xg-zf";
        rec.anchor = "u = f^{-2/3}[w(z) - x(K+f')/(3 f^{1/3}) - ...], z = y^3/f^2; red13";
        Expr gc = pow(mul(f, expe(integral(div(K, f), "t"))), Rational(1, 3));
        rec.gens = {cgen(num(0), gc, num(0), num(0)), cgen(num(0), num(0), num(0), f)};
        rec.invariants = {{"z", div(pow(y, 3), pow(f, 2))}};
        rec.alpha = mul(pow(f, Rational(-2, 3)),
                        add(neg(div(mul(x, add(K, f1)), mul(num(3), pow(f, Rational(1, 3))))),
                            neg(mul(div(pow(y, 2), mul(num(6), pow(f, Rational(4, 3)))),
                                    add({mul(frac(-1, 3), K, f1), mul(frac(-2, 3), pow(f1, 2)),
                                         mul(f, f2)})))));
        rec.beta = pow(f, Rational(-2, 3));
        rec.target = add({mul(num(9), pow(zs, Rational(4, 3)), wzz),
                          mul(num(6), pow(zs, Rational(1, 3)), wz), div(pow(K, 2), num(9))});
        rec.notes.push_back("integrability condition comp13 substituted: g^3 = f exp(Int(K/f, t))");
        out.push_back(rec);
    }
    {
        // constraint comp23 baked in: h = C (f^2 exp(-Int(K/f)))^{1/3}
        ReductionRecord rec;
        rec.id = "yh-zf";
        rec.anchor = "fmlHF: u = f^{-2/3}[w(z) - ...], z = (12xf + y^2(K - 2f'))/f^{4/3}; red23";
        Expr hc = mul(param("Ch"),
                      pow(mul(pow(f, 2), expe(neg(integral(div(K, f), "t")))), Rational(1, 3)));
        rec.gens = {cgen(num(0), num(0), hc, num(0)), cgen(num(0), num(0), num(0), f)};
        rec.invariants = {
            {"z", div(add(mul(num(12), x, f), mul(pow(y, 2), sub(K, mul(num(2), f1)))),
                      pow(f, Rational(4, 3)))}};
        rec.alpha = mul(pow(f, Rational(-2, 3)),
                        add(neg(div(mul(pow(y, 2), f1, sub(K, mul(num(2), f1))),
                                    mul(num(18), pow(f, Rational(4, 3))))),
                            neg(div(add({mul(num(-6), K, x), mul(num(6), x, f1),
                                         mul(num(3), pow(y, 2), f2)}),
                                    mul(num(18), pow(f, Rational(1, 3)))))));
        rec.beta = pow(f, Rational(-2, 3));
        rec.target = add({pow(K, 2), mul(num(90), K, wz), mul(num(1296), pow(wz, 2)),
                          mul(num(36), add(mul(num(36), w0), mul(K, zs)), wzz)});
        rec.notes.push_back("integrability condition comp23 substituted: h = C (f^2 exp(-Int(K/f, t)))^{1/3}");
        out.push_back(rec);
    }
    return out;
}

// ---- integrability conditions -------------------------------------------------------

inline std::vector<CheckResult> verify_integrability(uint64_t seed = 42) {
    std::vector<CheckResult> out;
    Expr t = sym("t"), K = param("K");
    Expr f = opaque("f"), g = opaque("g"), h = opaque("h");
    Expr f1 = opaque("f", 1), f2 = opaque("f", 2);
    Expr g1 = opaque("g", 1), g2 = opaque("g", 2);
    Expr h1 = opaque("h", 1), h2 = opaque("h", 2);
    {
        // comp13: g^3 = f exp(Int(K/f)) makes -3fg'^2 - g^2 f'' + 3g(f'g' + fg'') vanish
        Stopwatch sw;
        Expr cond = add({mul(num(-3), f, pow(g1, 2)), neg(mul(pow(g, 2), f2)),
                         mul(num(3), g, add(mul(f1, g1), mul(f, g2)))});
        Bindings b;
        b.funcs["g"] = {"t", pow(mul(f, expe(integral(div(K, f), "t"))), Rational(1, 3))};
        Expr sub13 = substitute(cond, b);
        CheckResult r = CheckResult::pass("integrability.comp13",
                                          "g^3 = f exp(Int(K/f, t)) satisfies the x-z condition");
        if (!is_zero_strict(sub13)) {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(sub13));
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    {
        // comp23e/comp23: h = C (f^2 exp(-Int(K/f)))^{1/3} satisfies
        // 3 f h'^2 + 2 h^2 f'' - 3 h (f'h' + f h'') = 0
        Stopwatch sw;
        Expr cond = add({mul(num(3), f, pow(h1, 2)), mul(num(2), pow(h, 2), f2),
                         mul(num(-3), h, add(mul(f1, h1), mul(f, h2)))});
        Bindings b;
        b.funcs["h"] = {
            "t", mul(param("Ch"),
                     pow(mul(pow(f, 2), expe(neg(integral(div(K, f), "t")))), Rational(1, 3)))};
        Expr sub23 = substitute(cond, b);
        CheckResult r = CheckResult::pass("integrability.comp23",
                                          "h = C (f^2 exp(-Int(K/f, t)))^{1/3} satisfies comp23e");
        if (!is_zero_strict(sub23)) {
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(sub23));
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    {
        // x-y pair: derived condition vs the printed one, plus the paper's own
        // first integral and solution family against the derived condition
        Stopwatch sw;
        ReductionRecord rec;
        for (auto& rr : reduction_catalog())
            if (rr.id == "xg-yh") rec = rr;
        Expr residual = reduction_residual(rec);
        // derived condition: residual times -(2hg)
        Expr derived = nf_to_expr(normalize(mul(num(-2), h, g, residual)));
        Expr printed = rec.target;
        CheckResult r = CheckResult::pass("integrability.xy",
                                          "x-y pair condition re-derived from the reduction residual");
        if (is_zero_strict(sub(derived, printed))) {
            r.note("printed condition matches the derived one");
        } else {
            // the record-level correction is counted on reduction.xg-yh; here
            // the re-derivation is reported as a finding
            r.note("printed condition -g'h' + 2hg'' - gh'' = 0 is inconsistent with the "
                   "re-derived condition " +
                   to_string(derived) + " = 0 (sign of g'h'); see reduction.xg-yh");
        }
        // first integral h' - 2(g'/g) h + K/g = 0 and its solution family
        Expr family = sub(mul(pow(g, 2), param("alpha")),
                          mul(param("K"), pow(g, 2), integral(pow(g, Rational(-3)), "t")));
        Bindings bh;
        bh.funcs["h"] = {"t", family};
        Expr first_integral =
            add({h1, mul(num(-2), div(g1, g), h), div(param("K"), g)});
        if (!is_zero_strict(substitute(first_integral, bh))) {
            r.status = Status::Fail;
            r.residual = "solution family fails the first integral";
        }
        if (!is_zero_strict(substitute(derived, bh))) {
            r.status = Status::Fail;
            r.residual = "solution family fails the derived condition";
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    (void)seed;
    return out;
}

// ---- exact solutions ------------------------------------------------------------------

struct SolutionRecord {
    std::string id;
    std::string anchor;
    Expr u;
    std::vector<std::string> notes;
};

inline CheckResult verify_exact_solution(const SolutionRecord& sol, uint64_t seed = 42) {
    Stopwatch sw;
    Expr residual = zk_residual_of(sol.u);
    CheckResult r = CheckResult::pass("solution." + sol.id, sol.anchor);
    switch (is_zero(residual)) {
        case ZeroStatus::Zero:
            break;
        case ZeroStatus::NonZero:
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(residual));
            break;
        case ZeroStatus::Unknown: {
            NumericCheck nc = numeric_zero_check(residual, seed);
            r.mode = "numeric";
            r.max_abs = nc.max_abs;
            r.max_rel = nc.max_rel;
            r.status = nc.pass ? Status::AbstainedNumericPass : Status::Fail;
            break;
        }
    }
    for (auto& n : sol.notes) r.note(n);
    r.ms = sw.ms();
    return r;
}

inline std::vector<SolutionRecord> solution_catalog() {
    Expr t = sym("t"), x = sym("x"), y = sym("y");
    Expr K = param("K"), al = param("alpha"), be = param("beta");
    Expr a1 = param("a1"), a2 = param("a2"), a3 = param("a3");
    Expr g = opaque("g"), g1 = opaque("g", 1), g2 = opaque("g", 2);
    Expr f = opaque("f"), f1 = opaque("f", 1), f2 = opaque("f", 2);
    std::vector<SolutionRecord> out;
    {
        SolutionRecord s;
        s.id = "q1y-q2";
        s.anchor = "u = q1(t) y + q2(t) (reduction L1.1)";
        s.u = add(mul(opaque("q1"), y), opaque("q2"));
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "case2a";
        s.anchor = "u = (g'/g)(a(t) y + b(t) - x), g = a1 t + a2";
        Expr gl = add(mul(a1, t), a2);
        s.u = mul(div(a1, gl), add({mul(opaque("a"), y), opaque("b"), neg(x)}));
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "case3a-family";
        s.anchor = "printed case 3a invariant solution (large rational expression)";
        Expr D = mul(add(a1, t), add(mul(t, add(mul(num(2), a1), t), a2), mul(num(2), a3)));
        Expr numr = add({mul(num(-1), t, add(mul(num(2), a1), t), x, a2), mul(num(-2), x, a3),
                         mul(opaque("a"), add(a1, t),
                             add(mul(t, add(mul(num(2), a1), t), a2), mul(num(2), a3))),
                         mul(y, add(g, mul(add(neg(a1), neg(t)), g1)))});
        s.u = div(numr, D);
        s.notes.push_back("verifies identically; the stated constraints on g and h are not needed");
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "v0-xg";
        s.anchor = "u = -y^2 g' (x/(y^2 g) + g''/(2 g g'))";
        s.u = neg(mul(pow(y, 2), g1, add(div(x, mul(pow(y, 2), g)), div(g2, mul(num(2), g, g1)))));
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "sol12";
        s.anchor = "u = [w(t) - g^2 (2xg' + y^2 g'')(alpha - K Int(g^-3))]/(2 g^3 (alpha - K Int(g^-3)))";
        Expr I = integral(pow(g, Rational(-3)), "t");
        Expr A = sub(al, mul(K, I));
        s.u = div(sub(opaque("wfree"),
                      mul(pow(g, 2), add(mul(num(2), x, g1), mul(pow(y, 2), g2)), A)),
                  mul(num(2), pow(g, 3), A));
        s.notes.push_back("w(t) remains arbitrary: the residual vanishes identically with w opaque");
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "sol12b";
        s.anchor = "K = 0 case of sol12";
        s.u = div(sub(opaque("wfree"),
                      mul(al, pow(g, 2), add(mul(num(2), x, g1), mul(pow(y, 2), g2)))),
                  mul(num(2), al, pow(g, 3)));
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "sol03b";
        s.anchor = "u = (y^2/(6 f^2))[(2/3) f'^2 - (2x f'/y^2 + f'') f] (red03, w = 0)";
        s.u = mul(div(pow(y, 2), mul(num(6), pow(f, 2))),
                  sub(mul(frac(2, 3), pow(f1, 2)),
                      mul(add(div(mul(num(2), x, f1), pow(y, 2)), f2), f)));
        out.push_back(s);
    }
    {
        // pipeline closure: red13's solution pushed through the x-z reduction
        // formula; the printed display carries a1 (y^3/f^2)^{2/3}, the pipeline
        // gives a1 (y^3/f^2)^{1/3}
        SolutionRecord s;
        s.id = "sol13";
        s.anchor = "red13 solution substituted into the x-z reduction formula";
        Expr z = div(pow(y, 3), pow(f, 2));
        Expr wz = add({mul(frac(-1, 18), pow(K, 2), pow(z, Rational(2, 3))),
                       mul(num(3), a1, pow(z, Rational(1, 3))), a2});
        Expr alpha_xz =
            mul(pow(f, Rational(-2, 3)),
                add(neg(div(mul(x, add(K, f1)), mul(num(3), pow(f, Rational(1, 3))))),
                    neg(mul(div(pow(y, 2), mul(num(6), pow(f, Rational(4, 3)))),
                            add({mul(frac(-1, 3), K, f1), mul(frac(-2, 3), pow(f1, 2)),
                                 mul(f, f2)})))));
        s.u = add(alpha_xz, mul(pow(f, Rational(-2, 3)), wz));
        s.notes.push_back(
            "printed display shows 54 a1 (y^3/f^2)^{2/3}; the reduced-ODE solution term is "
            "3 a1 z^{1/3}, so the exponent must read 1/3 (recorded as a display finding)");
        out.push_back(s);
    }
    {
        SolutionRecord s;
        s.id = "sol230";
        s.anchor = "u = (1/(18 f^2))[2 y^2 f'^2 - 3 f (2x f' + y^2 f'') + 18 beta f^{4/3} (...)^{1/2}]";
        Expr radicand = sub(div(mul(num(4), sub(mul(num(6), x, f), mul(pow(y, 2), f1))),
                                pow(f, Rational(4, 3))),
                            al);
        s.u = mul(pow(mul(num(18), pow(f, 2)), Rational(-1)),
                  add({mul(num(2), pow(y, 2), pow(f1, 2)),
                       mul(num(-3), f, add(mul(num(2), x, f1), mul(pow(y, 2), f2))),
                       mul(num(18), be, pow(f, Rational(4, 3)), pow(radicand, Rational(1, 2)))}));
        out.push_back(s);
    }
    return out;
}

// Reduced-ODE solution check: substitute w(z) into a one-variable target.
inline CheckResult verify_reduced_ode_solution(const Expr& target_1var, const Expr& w_closed,
                                               const std::string& id, const std::string& anchor,
                                               uint64_t seed = 42) {
    Stopwatch sw;
    Expr z = sym("z");
    Bindings b;
    for_each_node(target_1var, [&](const Expr& n) {
        if (n->kind == Kind::Jet && n->dep == "w")
            b.jets[jet_key(n)] = diff_n(w_closed, z, static_cast<int>(n->index.size()));
    });
    Expr residual = substitute(target_1var, b);
    CheckResult r = CheckResult::pass(id, anchor);
    switch (is_zero(residual)) {
        case ZeroStatus::Zero:
            break;
        case ZeroStatus::NonZero:
            r.status = Status::Fail;
            r.residual = nf_to_string(normalize(residual));
            break;
        case ZeroStatus::Unknown: {
            NumericCheck nc = numeric_zero_check(residual, seed);
            r.mode = "numeric";
            r.max_abs = nc.max_abs;
            r.max_rel = nc.max_rel;
            r.status = nc.pass ? Status::AbstainedNumericPass : Status::Fail;
            break;
        }
    }
    r.ms = sw.ms();
    return r;
}

}  // namespace zk
