#pragma once

// Batch driver: run any subset of the verification suites and emit
// human-readable or machine-readable reports. Deterministic for a fixed
// (seed, samples, instantiations, tolerance).

#include "zk/equivalences.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace zk {

struct Options {
    uint64_t seed = 42;
    int samples = 100;
    int instantiations = 5;
    double tolerance = 1e-9;
    int replay_count = 12;  // random canonicalization replays per run
    std::vector<std::string> selectors;
    std::string format = "text";
    std::string out_path;
};

struct Command {
    std::string verb;  // tables | flows | adjoint | classify | reduce | solutions | equiv | chain | all
    Options opts;
};

// ---- suites -------------------------------------------------------------------

inline std::vector<CheckResult> suite_tables(const Options&) {
    std::vector<CheckResult> out = verify_structure_tables();
    auto j = verify_jacobi();
    out.insert(out.end(), j.begin(), j.end());
    auto l = verify_levi_witnesses();
    out.insert(out.end(), l.begin(), l.end());
    return out;
}

inline std::vector<CheckResult> suite_flows(const Options& o) {
    std::vector<CheckResult> out;
    Expr g = opaque("g"), h = opaque("h");

    auto group_law = [&](const std::string& id, const std::map<std::string, Expr>& map) {
        Stopwatch sw;
        NumericCheck nc = flow_group_law_numeric(map, o.seed, 40, o.tolerance);
        CheckResult r = CheckResult::pass("flow." + id + ".group-law",
                                          "psi(e1, psi(e2, w)) = psi(e1+e2, w) numerically");
        r.mode = "numeric";
        r.max_abs = nc.max_abs;
        r.max_rel = nc.max_rel;
        if (!nc.pass) {
            r.status = Status::Fail;
            r.residual = "group law violated";
        }
        r.ms = sw.ms();
        return r;
    };

    {
        FlowCase c1 = flow_case1();
        out.push_back(certify_flow(c1, o.seed));
        out.push_back(group_law("case1", c1.map));
    }
    {
        FlowCase c2 = flow_case2a();
        out.push_back(certify_flow(c2, o.seed));
        out.push_back(group_law("case2a", c2.map));
    }
    {
        auto map = flow_map_case2b();
        out.push_back(certify_flow_field("flow.case2b", "printed case 2b map for k0 v0 + x_g",
                                         generator_with_param_k0(g, num(0)), map));
        out.push_back(group_law("case2b", map));
    }
    {
        // case 3a: the printed map checked literally against x_g + y_h
        FlowCase c3 = flow_case3a_printed();
        CheckResult literal = certify_flow(c3, o.seed);
        CheckResult r = CheckResult::pass("flow.case3a", c3.anchor);
        if (literal.ok()) {
            r.status = Status::Fail;
            r.residual = "expected the printed map to fail the flow ODE for x_g + y_h";
        } else {
            r.status = Status::Corrected;
            r.note("paper formula inconsistent: " + literal.residual);
            // the printed map is the exact flow of the doubled generator
            FlowCase doubled = c3;
            doubled.gen.h = mul(num(2), h);
            CheckResult dd = certify_flow(doubled, o.seed);
            if (dd.ok()) r.note("printed map is the exact flow of x_g + y_{2h} (machine-checked)");
            // series-integrated flow for x_g + y_h, order 8
            VectorField v = make_generator(c3.gen);
            auto series = series_flow(v, 8);
            NumericCheck nc = flow_ode_residual_numeric(c3.gen, series, o.seed, 0.25, 40, 1e-8);
            r.mode = "numeric";
            r.max_abs = nc.max_abs;
            r.max_rel = nc.max_rel;
            if (!nc.pass) {
                r.status = Status::Fail;
                r.residual = "series flow residual too large";
            } else {
                r.note("series-integrated flow (order 8) supplied; ODE residual max_rel < 1e-8");
            }
        }
        out.push_back(r);
    }
    {
        auto map = flow_map_case3b();
        CheckResult r = certify_flow_field("flow.case3b",
                                           "derived closed-form flow of k0 v0 + x_g + y_h",
                                           generator_with_param_k0(g, h), map);
        // machine-checked relation to the printed map
        if (r.ok()) {
            auto printed = flow_map_case3b_printed();
            Bindings dbl;
            dbl.funcs["h"] = {"t", mul(num(2), opaque("h"))};
            bool match_mod_typo = true;
            for (auto& coord : {std::string("t"), std::string("y")}) {
                if (!is_zero_strict(sub(substitute(map.at(coord), dbl), printed.at(coord))))
                    match_mod_typo = false;
            }
            Expr xdiff = sub(substitute(map.at("x"), dbl), printed.at("x"));
            // difference must be exactly (2hh' - 2hh'')/(2 k0^2), the printed typo
            Expr typo = div(sub(mul(num(2), opaque("h"), opaque("h", 1)),
                                mul(num(2), opaque("h"), opaque("h", 2))),
                            mul(num(2), pow(param("k0"), 2)));
            if (match_mod_typo && is_zero_strict(sub(xdiff, typo)))
                r.note("printed map equals this flow under h -> 2h except its x-constant term "
                       "2hh'' (a typo for 2hh'; as printed it is not the identity at eps = 0)");
        }
        out.push_back(r);
        out.push_back(group_law("case3b", map));
    }
    {
        // solution transforms
        Expr u0 = add(mul(opaque("q1"), sym("y")), opaque("q2"));
        {
            Stopwatch sw;
            Expr tu = transform_solution("case1", u0);
            CheckResult r = CheckResult::pass("flow.case1.transform",
                                              "scaling transform keeps q1 y + q2 a solution");
            if (!is_zero_strict(zk_residual_of(tu))) {
                r.status = Status::Fail;
                r.residual = "transformed solution fails the equation";
            }
            Expr family = add(mul(expe(eps()), opaque("q1"), sym("y")),
                              mul(expe(mul(num(2), eps())), opaque("q2")));
            if (!is_zero_strict(sub(tu, family)))
                r.note("family closure check failed");
            else
                r.note("stays in the q1 y + q2 family with q1 -> e^eps q1, q2 -> e^{2eps} q2");
            r.ms = sw.ms();
            out.push_back(r);
        }
        {
            Stopwatch sw;
            Expr tu = transform_solution("case2a", u0);
            CheckResult r = CheckResult::pass("flow.case2a.transform",
                                              "translation transform keeps solutions");
            if (!is_zero_strict(zk_residual_of(tu))) {
                r.status = Status::Fail;
                r.residual = "transformed solution fails the equation";
            }
            r.ms = sw.ms();
            out.push_back(r);
        }
        {
            Stopwatch sw;
            Expr tu = transform_solution("case2b", u0);
            CheckResult r = CheckResult::pass("flow.case2b.transform",
                                              "printed case 2b solution transform, numeric check");
            Expr residual = zk_residual_of(tu);
            NumericCheck nc =
                numeric_zero_check(residual, o.seed, o.instantiations, o.samples, o.tolerance);
            r.mode = "numeric";
            r.max_abs = nc.max_abs;
            r.max_rel = nc.max_rel;
            if (!nc.pass) {
                r.status = Status::Fail;
                r.residual = "transformed solution fails numerically";
            }
            r.ms = sw.ms();
            out.push_back(r);
        }
        {
            // eps = 0 is the identity on solution records
            Stopwatch sw;
            CheckResult r = CheckResult::pass("flow.transform.identity",
                                              "eps = 0 transforms are the identity");
            for (auto& id : {std::string("case1"), std::string("case2a"), std::string("case2b")}) {
                Bindings at0;
                at0.symbols["eps"] = num(0);
                Expr tu = substitute(transform_solution(id, u0), at0);
                if (!is_zero_strict(sub(tu, u0))) {
                    r.status = Status::Fail;
                    r.residual = id + " transform is not the identity at eps = 0";
                }
            }
            r.ms = sw.ms();
            out.push_back(r);
        }
    }
    return out;
}

inline std::vector<CheckResult> suite_adjoint(const Options& o) {
    std::vector<CheckResult> out;
    struct Row {
        FamilyKind kind;
        const char* K;
        const char* seed;
        Rational expect;
    };
    for (auto& row : {Row{FamilyKind::X, "K", "g", Rational(1, 3)},
                      Row{FamilyKind::Y, "K", "h", Rational(2, 3)},
                      Row{FamilyKind::Z, "K", "f", Rational(1)}}) {
        Stopwatch sw;
        CheckResult wr = CheckResult::pass(
            std::string("adjoint.weight.") + (row.kind == FamilyKind::X   ? "x"
                                              : row.kind == FamilyKind::Y ? "y"
                                                                          : "z"),
            "flow-PDE constant derived from the commutator table");
        Rational c = family_weight_from_table(row.kind);
        if (!(c == row.expect)) {
            wr.status = Status::Fail;
            wr.residual = "derived weight " + c.to_string();
        }
        wr.ms = sw.ms();
        out.push_back(wr);
        AdjointResult ar = adjoint_closed_form(row.kind, row.K, row.seed, o.seed);
        out.push_back(ar.pde_cert);
        out.push_back(ar.seed_cert);
    }
    // Lie-series agreement for K = 1 and polynomial seeds of degree <= 3
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<Expr> terms{num(coeff(rng) == 0 ? 1 : coeff(rng))};
        for (int d = 1; d <= 3; ++d) terms.push_back(mul(num(coeff(rng)), pow(sym("t"), Rational(d))));
        Expr seed_poly = add(terms);
        FamilyKind kind = trial % 3 == 0   ? FamilyKind::X
                          : trial % 3 == 1 ? FamilyKind::Y
                                           : FamilyKind::Z;
        out.push_back(adjoint_lie_series_check(kind, seed_poly, 4,
                                               "adjoint.lie-series." + std::to_string(trial)));
    }
    return out;
}

inline GenericGenerator random_generic_generator(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> pick(0, 3);
    auto poly = [&](bool nonzero) {
        std::vector<Expr> ts;
        for (int d = 0; d <= 2; ++d) {
            int c = coeff(rng);
            if (c) ts.push_back(mul(num(c), pow(sym("t"), Rational(d))));
        }
        if (ts.empty() && nonzero) ts.push_back(num(1 + std::abs(coeff(rng))));
        return ts.empty() ? num(0) : add(ts);
    };
    GenericGenerator v;
    switch (pick(rng)) {
        case 0:  // x/y family branch
            v.g = poly(false);
            v.h = poly(false);
            if (is_zero_strict(v.g) && is_zero_strict(v.h)) v.g = num(1);
            break;
        case 1:  // v0 branch
            v.k0 = Rational(coeff(rng) == 0 ? 1 : coeff(rng));
            v.g = poly(false);
            v.h = poly(false);
            break;
        case 2:  // z branch
            v.f = poly(true);
            v.g = poly(false);
            v.h = poly(false);
            break;
        default:  // full generic
            v.k0 = Rational(coeff(rng) == 0 ? 2 : coeff(rng));
            v.f = poly(true);
            v.g = poly(false);
            v.h = poly(false);
            break;
    }
    return v;
}

inline std::vector<CheckResult> suite_classify(const Options& o) {
    std::vector<CheckResult> out;
    for (int d : {1, 2})
        for (auto& e : catalog(d)) out.push_back(verify_canonical_structure(e));
    {
        // constraint-violation collapses checked concretely
        Stopwatch sw;
        CheckResult r = CheckResult::pass("catalog.collapse",
                                          "violated constraints collapse L2.10 -> L2.9 and L2.12 -> L2.11");
        auto cat = catalog(2);
        for (auto& e : cat) {
            if (!e.violated_basis || e.violation_outcome.rfind("collapses:", 0) != 0) continue;
            VectorField w2 = e.violated_basis()[1].field();
            if (e.id == "L2.10") {
                if (!vf_equal(w2, vf_scale(gen_v0(), frac(1, 2)))) {
                    r.status = Status::Fail;
                    r.residual = "L2.10 violation is not v0/2";
                }
            } else if (e.id == "L2.12") {
                VectorField expect = vf_add(gen_v0(), gen_y(param("c2")));
                if (!vf_equal(w2, expect)) {
                    r.status = Status::Fail;
                    r.residual = "L2.12 violation is not v0 + y_(c2)";
                }
            }
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    {
        // canonicalization examples from the classification
        GenericGenerator a;
        a.k0 = Rational(1);
        a.g = opaque("g");
        out.push_back(canonicalize_replay(a, "canon.v0-plus-xg"));
        GenericGenerator b;
        b.g = add(num(1), mul(num(2), sym("t")));
        out.push_back(canonicalize_replay(b, "canon.xg"));
    }
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < o.replay_count; ++i) {
        GenericGenerator v = random_generic_generator(rng);
        out.push_back(canonicalize_replay(v, "canon.replay." + std::to_string(i)));
    }
    {
        // Lemma 1(c) ODE instance: the corrected closed form solves it
        Expr f = opaque("f"), f1 = opaque("f", 1), h = opaque("h");
        auto sol = solve_linear_first_order(neg(mul(frac(2, 3), div(f1, f))),
                                            neg(div(h, mul(param("beta"), f))), "canon.lemma1c-ode");
        CheckResult r = sol.residual_cert;
        r.anchor = "H' - (2/3)(f'/f) H = -h/(beta f) solved with mu = f^{-2/3}";
        r.note("solution H = f^{2/3} (C + Int(-h/(beta f^{5/3}), t)); the printed display "
               "integrates -h/(beta f), which fails the equation");
        out.push_back(r);
    }
    return out;
}

inline std::vector<CheckResult> suite_reduce(const Options& o) {
    std::vector<CheckResult> out;
    for (auto& rec : reduction_catalog()) {
        InvarianceOutcome inv = verify_invariance(rec);
        out.push_back(inv.check);
        if (!inv.check.ok()) continue;
        ReductionOutcome red = verify_reduction(inv.record);
        out.push_back(red.check);
        if (rec.id == "case3a" && red.check.ok()) {
            // the printed system is recorded; its mismatch with the derived
            // reduction is flagged with machine-checked facts
            Stopwatch sw;
            CheckResult r = CheckResult::pass("reduction.case3a.printed-system",
                                              "printed three-equation system vs the derived reduction");
            Expr residual = reduction_residual(inv.record);
            // specialize g = 0, h = 1: the derived equation collapses onto the
            // third printed member
            Bindings bs;
            bs.funcs["g"] = {"t", num(0)};
            bs.funcs["h"] = {"t", num(1)};
            Expr m3 = substitute_target(inv.record, rec.printed_system[2]);
            Expr special_res = substitute(residual, bs);
            Expr special_m3 = substitute(m3, bs);
            NormalForm q = normalize(div(special_res, special_m3));
            bool third_matches = !q.is_zero() && q.num.size() == 1;
            if (third_matches)
                r.note("at g = 0, h = 1 the derived reduction equals the printed third member "
                       "up to a constant factor");
            // the full printed system is not the similarity reduction
            Expr m1 = substitute_target(inv.record, rec.printed_system[0]);
            NormalForm q1 = normalize(div(residual, m1));
            if (q1.num.size() > 1)
                r.note("the printed first member does not divide the derived reduction: the "
                       "system as printed is not the similarity reduction (recorded, not repaired)");
            r.ms = sw.ms();
            out.push_back(r);
        }
    }
    auto integ = verify_integrability(o.seed);
    out.insert(out.end(), integ.begin(), integ.end());
    return out;
}

inline std::vector<CheckResult> suite_solutions(const Options& o) {
    std::vector<CheckResult> out;
    for (auto& s : solution_catalog()) out.push_back(verify_exact_solution(s, o.seed));
    {
        Expr z = sym("z"), K = param("K");
        Expr w13 = add({mul(frac(-1, 18), pow(K, 2), pow(z, Rational(2, 3))),
                        mul(num(3), param("a1"), pow(z, Rational(1, 3))), param("a2")});
        out.push_back(verify_reduced_ode_solution(odes::red13(), w13, "odesol.red13",
                                                  "red13 closed-form solution", o.seed));
        Expr w230 = mul(param("beta"), pow(sub(mul(num(2), z), param("alpha")), Rational(1, 2)));
        out.push_back(verify_reduced_ode_solution(odes::red230(), w230, "odesol.red230",
                                                  "w = beta sqrt(2z - alpha) solves red230", o.seed));
        out.push_back(verify_reduced_ode_solution(odes::red230(), num(0), "odesol.red230.zero",
                                                  "w = 0 solves red230", o.seed));
    }
    {
        // pipeline closure: red230's solution pushed through the y-z reduction
        // formula at K = 0 reproduces the printed sol230
        Stopwatch sw;
        CheckResult r = CheckResult::pass("solution.sol230.pipeline",
                                          "red230 solution through the y-z formula equals sol230");
        ReductionRecord yz;
        for (auto& rec : reduction_catalog())
            if (rec.id == "yh-zf") yz = rec;
        Bindings k0b;
        k0b.symbols["K"] = num(0);
        Expr alpha0 = substitute(yz.alpha, k0b);
        Expr z0 = substitute(yz.invariants[0].second, k0b);
        Expr w230 = mul(param("beta"), pow(sub(mul(num(2), z0), param("alpha")), Rational(1, 2)));
        Expr u_built = add(alpha0, mul(substitute(yz.beta, k0b), w230));
        Expr printed;
        for (auto& s : solution_catalog())
            if (s.id == "sol230") printed = s.u;
        Expr d = sub(u_built, printed);
        switch (is_zero(d)) {
            case ZeroStatus::Zero:
                break;
            case ZeroStatus::NonZero:
                r.status = Status::Fail;
                r.residual = nf_to_string(normalize(d));
                break;
            case ZeroStatus::Unknown: {
                NumericCheck nc =
                    numeric_zero_check(d, o.seed, o.instantiations, o.samples, o.tolerance);
                r.mode = "numeric";
                r.max_rel = nc.max_rel;
                r.status = nc.pass ? Status::AbstainedNumericPass : Status::Fail;
                break;
            }
        }
        r.ms = sw.ms();
        out.push_back(r);
    }
    return out;
}

inline std::vector<CheckResult> suite_equiv(const Options& o) {
    std::vector<CheckResult> out;
    out.push_back(check_zhu2_to_zhu2b());
    for (auto& r : check_red23_to_bform()) out.push_back(r);
    out.push_back(check_k0_b0_coincidences());
    for (auto& r : verify_ode_symmetries(o.seed)) out.push_back(r);
    return out;
}

inline std::vector<CheckResult> suite_chain(const Options& o) {
    auto out = verify_solvable_chain(o.seed);
    out.push_back(chain_composition());
    return out;
}

// ---- dispatch -----------------------------------------------------------------

inline const std::vector<std::string>& known_id_prefixes() {
    static const std::vector<std::string> p = {
        "com.",       "kmv.",      "jacobi.",   "levi.",     "flow.",     "adjoint.",
        "catalog.",   "canon.",    "invariance.", "reduction.", "integrability.",
        "solution.",  "odesol.",   "equiv.",    "odesym.",   "chain."};
    return p;
}

inline const std::vector<std::string>& known_id_fragments() {
    static const std::vector<std::string> f = {
        "L1.1",  "L1.2",  "L1.3",  "L1.4",  "L2.1",  "L2.2",  "L2.3",  "L2.4",  "L2.5",
        "L2.6",  "L2.7",  "L2.8",  "L2.9",  "L2.10", "L2.11", "L2.12", "z1",    "case1",
        "case2a", "case2b", "case3a", "case3b", "case4", "v0-xg", "v0-yh", "xg-yh",
        "v0-zf", "xg-zf", "yh-zf", "comp13", "comp23", "xy",    "red03", "red23",
        "red230", "zhu2",  "zhuA0", "q1y-q2", "case3a-family", "sol12", "sol12b",
        "sol03b", "sol13", "sol230", "rectify", "symmetry", "first-integral",
        "xi-equation", "implicit", "root",  "replay", "lemma1c-ode", "collapse",
        "group-law", "transform", "weight", "pde", "seed", "lie-series", "bracket",
        "bform", "k0-b0", "composition", "pipeline", "v0-plus-xg", "xg", "yh", "zf"};
    return f;
}

inline bool selector_known(const std::string& sel) {
    for (auto& p : known_id_prefixes())
        if (sel.rfind(p, 0) == 0 || p.rfind(sel, 0) == 0) return true;
    for (auto& f : known_id_fragments())
        if (sel.find(f) != std::string::npos) return true;
    return false;
}

struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ReportDocument run(const Command& cmd) {
    for (auto& sel : cmd.opts.selectors)
        if (!selector_known(sel)) throw RunError("unknown selector: " + sel);

    ReportDocument doc;
    doc.command = cmd.verb;
    std::vector<CheckResult> entries;
    auto append = [&](std::vector<CheckResult> v) {
        entries.insert(entries.end(), v.begin(), v.end());
    };
    const Options& o = cmd.opts;
    if (cmd.verb == "tables") append(suite_tables(o));
    else if (cmd.verb == "flows") append(suite_flows(o));
    else if (cmd.verb == "adjoint") append(suite_adjoint(o));
    else if (cmd.verb == "classify") append(suite_classify(o));
    else if (cmd.verb == "reduce") append(suite_reduce(o));
    else if (cmd.verb == "solutions") append(suite_solutions(o));
    else if (cmd.verb == "equiv") append(suite_equiv(o));
    else if (cmd.verb == "chain") append(suite_chain(o));
    else if (cmd.verb == "all") {
        append(suite_tables(o));
        append(suite_flows(o));
        append(suite_adjoint(o));
        append(suite_classify(o));
        append(suite_reduce(o));
        append(suite_solutions(o));
        append(suite_equiv(o));
        append(suite_chain(o));
    } else {
        throw RunError("unknown verb: " + cmd.verb);
    }

    if (!o.selectors.empty()) {
        std::vector<CheckResult> kept;
        for (auto& e : entries) {
            for (auto& sel : o.selectors) {
                if (e.id.find(sel) != std::string::npos) {
                    kept.push_back(e);
                    break;
                }
            }
        }
        entries = std::move(kept);
    }
    doc.entries = std::move(entries);
    return doc;
}

inline int emit_report(const ReportDocument& doc, const Options& o) {
    std::string body = o.format == "json" ? doc.to_json().dump(2) + "\n" : doc.to_text();
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) {
            std::cerr << "cannot open output path: " << o.out_path << "\n";
            return 3;
        }
        f << body;
    } else {
        std::cout << body;
    }
    return doc.verdict_pass() ? 0 : 1;
}

}  // namespace zk
