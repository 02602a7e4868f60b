// Acceptance suite: runs the numbered criteria end to end, printing one
// pass/fail line each. Usage: zk_acceptance [N] runs criterion N (1..12);
// with no argument all criteria run. Exit status 0 iff every requested
// criterion passes.
//
// Criterion 10's middle clause (the printed change of variables carrying
// red23 onto the -B^2/3 + Bv' + v'^2 + vv'' form with the printed constants)
// is recorded as failing by the engine's own analysis: the transformed
// equation is v'^2 + vv'' - 18Km v' - 648K^2m^2 = 0 and no constants repair
// it. Criterion 12's exit-status clause inherits that single failure. Both
// are reported honestly rather than weakened.

#include "zk/engine.hpp"
#include "zk/parse.hpp"

#include <iostream>

using namespace zk;

namespace {

struct Criterion {
    int n;
    std::string title;
    bool pass;
    std::vector<std::string> detail;
};

void note(Criterion& c, bool ok, const std::string& what) {
    if (!ok) {
        c.pass = false;
        c.detail.push_back("FAILED: " + what);
    }
}

bool all_ok(const std::vector<CheckResult>& rows, Criterion& c, const std::string& what) {
    bool ok = true;
    for (auto& r : rows)
        if (!r.ok()) {
            ok = false;
            c.detail.push_back("FAILED: " + what + " / " + r.id + ": " + r.residual);
        }
    if (!ok) c.pass = false;
    return ok;
}

Criterion criterion1() {
    Criterion c{1, "structure tables symbolically exact, under 5 s", true, {}};
    Stopwatch sw;
    auto com = verify_commutator_table();
    note(c, com.size() == 10, "ten commutator-table identities");
    all_ok(com, c, "commutator table");
    auto kmv = verify_kmv_table(3);
    note(c, kmv.size() == 7 * 7 * 6, "full Laurent grid");
    all_ok(kmv, c, "Laurent-mode brackets");
    bool yz_flagged = false, transposed_flagged = false;
    for (auto& r : kmv)
        for (auto& n : r.notes) {
            if (n.find("t^{m+n-1}") != std::string::npos) yz_flagged = true;
            if (n.find("transposed") != std::string::npos) transposed_flagged = true;
        }
    note(c, yz_flagged, "y-z subscript reading flagged");
    note(c, transposed_flagged, "printed m,n label transposition flagged");
    long ms = sw.ms();
    note(c, ms < 5000, "runtime " + std::to_string(ms) + " ms < 5000 ms");
    c.detail.push_back("runtime " + std::to_string(ms) + " ms");
    return c;
}

Criterion criterion2() {
    Criterion c{2, "symmetry criterion: four families pass, d_u fails with -u_xx", true, {}};
    JetEquation eq = zk_equation();
    note(c, is_symmetry(gen_v0(), eq, "a", "").ok(), "scaling field");
    note(c, is_symmetry(gen_x(opaque("g")), eq, "b", "").ok(), "x family, opaque g");
    note(c, is_symmetry(gen_y(opaque("h")), eq, "c", "").ok(), "y family, opaque h");
    note(c, is_symmetry(gen_z(opaque("f")), eq, "d", "").ok(), "z family, opaque f");
    VectorField du;
    du.xi["t"] = num(0);
    du.xi["x"] = num(0);
    du.xi["y"] = num(0);
    du.phi = num(1);
    CheckResult r = is_symmetry(du, eq, "e", "");
    note(c, r.status == Status::Fail, "d_u rejected");
    note(c, r.residual == to_string(nf_to_expr(normalize(parse("-u_xx")))),
         "residual is exactly -u_xx");
    return c;
}

Criterion criterion3() {
    Criterion c{3, "Jacobi identity and radical/nilradical witnesses", true, {}};
    auto j = verify_jacobi();
    note(c, j.size() == 64, "all 64 family triples");
    all_ok(j, c, "Jacobi");
    all_ok(verify_levi_witnesses(), c, "semidirect-structure witnesses");
    return c;
}

Criterion criterion4() {
    Criterion c{4, "flows: 1, 2a, 2b, 3b certify; 3a inconsistent with series fallback", true, {}};
    Options o;
    auto rows = suite_flows(o);
    for (auto& r : rows) {
        if (r.id == "flow.case1" || r.id == "flow.case2a" || r.id == "flow.case2b" ||
            r.id == "flow.case3b")
            note(c, r.status == Status::Pass, r.id + " certifies symbolically");
        if (r.id.find("group-law") != std::string::npos)
            note(c, r.ok() && r.max_rel <= 1e-9, r.id + " to 1e-9");
        if (r.id == "flow.case3a") {
            note(c, r.status == Status::Corrected, "case 3a reported as inconsistent");
            bool flagged = false, series_ok = false;
            for (auto& n : r.notes) {
                if (n.find("paper formula inconsistent") != std::string::npos) flagged = true;
                if (n.find("order 8") != std::string::npos) series_ok = true;
            }
            note(c, flagged, "inconsistency note attached");
            note(c, series_ok && r.max_rel < 1e-8, "series flow residual < 1e-8 at order 8");
        }
        if (r.id.find("transform") != std::string::npos) note(c, r.ok(), r.id);
    }
    return c;
}

Criterion criterion5() {
    Criterion c{5, "adjoint closed forms: flow PDEs symbolic, Lie series exact to eps^4", true, {}};
    for (auto kind : {FamilyKind::X, FamilyKind::Y, FamilyKind::Z}) {
        AdjointResult ar = adjoint_closed_form(kind, "K", "g");
        note(c, ar.pde_cert.ok(), "flow PDE, opaque K");
        note(c, ar.seed_cert.ok(), "seed condition at eps = 0");
    }
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int i = 0; i < 6; ++i) {
        std::vector<Expr> ts{num(coeff(rng))};
        for (int d = 1; d <= 3; ++d) ts.push_back(mul(num(coeff(rng)), pow(sym("t"), Rational(d))));
        Expr seed = add(ts);
        if (is_zero_strict(seed)) seed = num(1);
        FamilyKind kind = i % 3 == 0 ? FamilyKind::X : i % 3 == 1 ? FamilyKind::Y : FamilyKind::Z;
        note(c, adjoint_lie_series_check(kind, seed, 4, "ls").ok(),
             "Lie series matches closed form through eps^4");
    }
    return c;
}

Criterion criterion6() {
    Criterion c{6, "classification: 4 + 12 entries verify; 50 replays land exactly", true, {}};
    auto d1 = catalog(1);
    auto d2 = catalog(2);
    note(c, d1.size() == 4 && d2.size() == 12, "entry counts");
    for (auto& e : d1) note(c, verify_canonical_structure(e).ok(), "entry " + e.id);
    for (auto& e : d2) note(c, verify_canonical_structure(e).ok(), "entry " + e.id);
    std::mt19937_64 rng(42);
    int passed = 0;
    for (int i = 0; i < 50; ++i) {
        GenericGenerator v = random_generic_generator(rng);
        CheckResult r = canonicalize_replay(v, "replay");
        if (r.ok()) ++passed;
        else c.detail.push_back("FAILED replay " + std::to_string(i) + ": " + r.residual);
    }
    note(c, passed == 50, "replays with zero componentwise residual: " + std::to_string(passed) +
                              "/50");
    return c;
}

Criterion criterion7() {
    Criterion c{7, "reductions: all records pass with exactly the two known corrections", true, {}};
    auto recs = reduction_catalog();
    note(c, recs.size() >= 13, "at least 13 records");
    std::vector<std::string> corrected;
    ReductionRecord z1, c4;
    for (auto& rec : recs) {
        InvarianceOutcome inv = verify_invariance(rec);
        note(c, inv.check.ok(), "invariance " + rec.id);
        if (inv.check.status == Status::Corrected) corrected.push_back("invariance." + rec.id);
        if (!inv.check.ok()) continue;
        ReductionOutcome red = verify_reduction(inv.record);
        note(c, red.check.ok(), "reduction " + rec.id);
        if (red.check.status == Status::Corrected) corrected.push_back("reduction." + rec.id);
        if (rec.id == "z1") z1 = rec;
        if (rec.id == "case4") c4 = rec;
    }
    bool exact_two = corrected.size() == 2;
    for (auto& id : corrected)
        exact_two &= (id == "invariance.L1.3" || id == "reduction.xg-yh");
    note(c, exact_two, "exactly the scaling-variable and condition-sign corrections");
    note(c, is_zero_strict(sub(z1.target, c4.target)),
         "the z-translation and case-4 records share an identical target");
    return c;
}

Criterion criterion8() {
    Criterion c{8, "integrability conditions substitute to symbolic zero", true, {}};
    all_ok(verify_integrability(), c, "integrability");
    return c;
}

Criterion criterion9() {
    Criterion c{9, "exact solutions verify, arbitrariness findings recorded", true, {}};
    auto sols = solution_catalog();
    note(c, sols.size() == 9, "nine solution records");
    bool arb = false;
    for (auto& s : sols) {
        CheckResult r = verify_exact_solution(s);
        note(c, r.ok(), "solution " + s.id);
        for (auto& n : r.notes)
            if (n.find("arbitrary") != std::string::npos) arb = true;
    }
    note(c, arb, "free-function finding recorded");
    return c;
}

Criterion criterion10() {
    Criterion c{10, "equivalences of the reduced equations", true, {}};
    note(c, check_zhu2_to_zhu2b().ok(), "shift onto the A-normalized form");
    auto bform = check_red23_to_bform();
    // faithful check of the printed claim with the exact sqrt(21) constants
    note(c, bform[0].ok(),
         "printed change of variables carries red23 onto the B-form "
         "(the engine derives v'^2 + vv'' - 18Km v' - 648K^2m^2 instead; c/b^2 = -2 vs -1/3)");
    note(c, bform[1].ok(), "derived image of the change of variables");
    note(c, check_k0_b0_coincidences().ok(), "K = 0 / B = 0 coincidences");
    all_ok(verify_ode_symmetries(), c, "reduced-ODE symmetries and the solvable bracket");
    return c;
}

Criterion criterion11() {
    Criterion c{11, "solvable chain: rectification through the implicit cubic root", true, {}};
    all_ok(verify_solvable_chain(), c, "chain steps");
    // the eliminant divides exactly with the hand-computed quotient
    Expr Hs = sym("H"), yv = sym("y"), a = param("a");
    Expr P = add({mul(a, pow(Hs, 3)), neg(pow(yv, 3)), mul(num(54), Hs, pow(yv, 3)),
                  mul(num(-23328), pow(Hs, 3), pow(yv, 3))});
    Expr C = add({neg(Hs), mul(num(18), pow(Hs, 2)), mul(num(648), pow(Hs, 3))});
    Expr R = sub(mul(C, partial_diff(P, Hs)), mul(yv, partial_diff(P, yv)));
    Expr Q = add({mul(num(1944), pow(Hs, 2)), mul(num(54), Hs), num(-3)});
    note(c, is_zero_strict(sub(R, mul(Q, P))), "pseudo-remainder exactly zero");
    return c;
}

Criterion criterion12() {
    Criterion c{12, "end to end: full run under 2 minutes, deterministic, exit 0", true, {}};
    Stopwatch sw;
    Command cmd;
    cmd.verb = "all";
    cmd.opts.seed = 42;
    ReportDocument doc = run(cmd);
    long ms = sw.ms();
    note(c, ms < 120000, "runtime " + std::to_string(ms) + " ms < 120000 ms");
    c.detail.push_back("runtime " + std::to_string(ms) + " ms, " +
                       std::to_string(doc.entries.size()) + " checks");
    ReportDocument doc2 = run(cmd);
    note(c, doc.to_json().dump() == doc2.to_json().dump(), "identical seeded runs byte-identical");
    // exactly the two reduction-record corrections are flagged in the reduce
    // suite (the flows suite carries the mandated case-3a inconsistency flag)
    int reduce_corrected = 0;
    bool correct_ids = true;
    for (auto& e : doc.entries) {
        if (e.status != Status::Corrected) continue;
        if (e.id.rfind("invariance.", 0) == 0 || e.id.rfind("reduction.", 0) == 0) {
            ++reduce_corrected;
            correct_ids &= (e.id == "invariance.L1.3" || e.id == "reduction.xg-yh");
        }
    }
    note(c, reduce_corrected == 2 && correct_ids,
         "exactly the two known reduction corrections flagged");
    note(c, doc.verdict_pass(),
         "exit status 0 (fails: " + std::to_string(doc.fail_count()) +
             "; the single failing entry is the printed B-form equivalence, see the equiv suite)");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        which.push_back(std::atoi(argv[1]));
    } else {
        for (int i = 1; i <= 12; ++i) which.push_back(i);
    }
    bool all_pass = true;
    for (int n : which) {
        Criterion c{0, "", true, {}};
        switch (n) {
            case 1: c = criterion1(); break;
            case 2: c = criterion2(); break;
            case 3: c = criterion3(); break;
            case 4: c = criterion4(); break;
            case 5: c = criterion5(); break;
            case 6: c = criterion6(); break;
            case 7: c = criterion7(); break;
            case 8: c = criterion8(); break;
            case 9: c = criterion9(); break;
            case 10: c = criterion10(); break;
            case 11: c = criterion11(); break;
            case 12: c = criterion12(); break;
            default:
                std::cerr << "unknown criterion " << n << "\n";
                return 2;
        }
        std::cout << "criterion " << c.n << ": " << (c.pass ? "PASS" : "FAIL") << " - " << c.title
                  << "\n";
        for (auto& d : c.detail) std::cout << "    " << d << "\n";
        all_pass &= c.pass;
    }
    return all_pass ? 0 : 1;
}
