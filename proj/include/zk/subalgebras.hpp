#pragma once

// Classified canonical subalgebras (dimensions one and two) as data, their
// structure verification, closed-form solutions of the linear first-order
// ODEs used by the canonicalization lemma, and constructive canonicalization
// of generic generators with replay certificates.

#include "zk/algebra.hpp"

namespace zk {

// ---- catalog ------------------------------------------------------------------

struct CatalogGenerator {
    Expr k0 = num(0);  // coefficient of v0 (parameter or rational)
    Expr g = num(0);
    Expr h = num(0);
    Expr f = num(0);

    VectorField field() const {
        VectorField v = vf_scale(gen_v0(), k0);
        v = vf_add(v, gen_x(g));
        v = vf_add(v, gen_y(h));
        v = vf_add(v, gen_z(f));
        return v;
    }
};

enum class StructureClass { Abelian, NonAbelian };

struct CanonicalEntry {
    std::string id;
    int dim = 1;
    std::vector<CatalogGenerator> basis;
    std::string basis_text;
    std::string constraint_text;
    StructureClass cls = StructureClass::Abelian;
    std::vector<std::string> flags;  // print discrepancies etc.
    // violation of the constraint and the degeneration it must produce
    std::function<std::vector<CatalogGenerator>()> violated_basis;
    std::string violation_outcome;  // "dependent" | "collapses:<id>" | ""
};

inline std::vector<CanonicalEntry> catalog(int dim) {
    Expr t = sym("t");
    Expr k0 = param("k0"), k1 = param("k1");
    Expr c1 = param("c1"), c2 = param("c2"), c3 = param("c3");
    Expr g = opaque("g"), h = opaque("h");
    std::vector<CanonicalEntry> out;
    auto cg = [](Expr k0c, Expr gc, Expr hc, Expr fc) {
        CatalogGenerator r;
        r.k0 = std::move(k0c);
        r.g = std::move(gc);
        r.h = std::move(hc);
        r.f = std::move(fc);
        return r;
    };
    if (dim == 1) {
        {
            CanonicalEntry e;
            e.id = "L1.1";
            e.basis = {cg(num(0), num(1), num(0), num(0))};
            e.basis_text = "{x_(1)}";
            out.push_back(e);
        }
        {
            CanonicalEntry e;
            e.id = "L1.2";
            e.basis = {cg(num(0), num(0), num(1), num(0))};
            e.basis_text = "{y_(1)}";
            out.push_back(e);
        }
        {
            CanonicalEntry e;
            e.id = "L1.3";
            e.basis = {cg(num(1), num(0), num(0), num(0))};
            e.basis_text = "{v0}";
            out.push_back(e);
        }
        {
            CanonicalEntry e;
            e.id = "L1.4";
            e.basis = {cg(k0, num(0), num(0), num(1))};
            e.basis_text = "{k0 v0 + z_(1)}";
            out.push_back(e);
        }
        return out;
    }

    // dimension two
    {
        CanonicalEntry e;
        e.id = "L2.1";
        e.dim = 2;
        e.basis = {cg(num(1), num(0), num(0), num(0)), cg(k0, num(0), num(0), num(1))};
        e.basis_text = "{v0, k0 v0 + z_(1)}";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.2";
        e.dim = 2;
        e.basis = {cg(k1, num(0), num(0), num(1)),
                   cg(k0, mul(c1, expe(mul(num(2), k1, t))), mul(c2, expe(mul(k1, t))), c3)};
        e.basis_text = "{k1 v0 + z_(1), k0 v0 + x_(c1 e^{2k1 t}) + y_(c2 e^{k1 t}) + z_(c3)}";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.3";
        e.dim = 2;
        e.basis = {cg(num(0), num(1), num(0), num(0)), cg(num(0), g, num(0), num(0))};
        e.basis_text = "{x_(1), x_g}";
        e.constraint_text = "g' != 0";
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(1), num(0), num(0)),
                                                 cg(num(0), param("c1"), num(0), num(0))};
        };
        e.violation_outcome = "dependent";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.4";
        e.dim = 2;
        e.basis = {cg(num(0), num(1), num(0), num(0)), cg(num(0), num(0), h, num(0))};
        e.basis_text = "{x_(1), y_h}";
        e.constraint_text = "h != 0";
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(1), num(0), num(0)),
                                                 cg(num(0), num(0), num(0), num(0))};
        };
        e.violation_outcome = "dependent";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.5";
        e.dim = 2;
        e.basis = {cg(num(0), num(1), num(0), num(0)),
                   cg(k0, num(0), num(0), add(mul(num(-6), k0, t), c3))};
        e.basis_text = "{x_(1), k0 v0 + z_(-6 k0 t + c3)}";
        e.constraint_text = "k0^2 + c3^2 != 0";
        e.flags.push_back(
            "printed coefficient 6 k0 t + c3 fails the abelian check "
            "([x_(1), k0 v0 + z_f] = (2 k0 + f'/3) x_(1) = 4 k0 x_(1)); corrected sign stored");
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(1), num(0), num(0)),
                                                 cg(num(0), num(0), num(0), num(0))};
        };
        e.violation_outcome = "dependent";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.6";
        e.dim = 2;
        e.basis = {cg(num(0), num(0), num(1), num(0)), cg(num(0), g, c2, num(0))};
        e.basis_text = "{y_(1), x_g + y_(c2)}";
        e.constraint_text = "g != 0";
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(0), num(1), num(0)),
                                                 cg(num(0), num(0), param("c2"), num(0))};
        };
        e.violation_outcome = "dependent";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.7";
        e.dim = 2;
        e.basis = {cg(num(0), num(0), num(1), num(0)),
                   cg(k0, num(0), c2, add(mul(frac(-3, 2), k0, t), c3))};
        e.basis_text = "{y_(1), k0 v0 + y_(c2) + z_(-(3/2) k0 t + c3)}";
        e.constraint_text = "k0^2 + c3^2 != 0";
        e.flags.push_back(
            "printed coefficient (-3/2)(k0 t + c3) differs from the derivation's "
            "-(3/2) k0 t + c3; both readings verified abelian (they reparameterize c3)");
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(0), num(1), num(0)),
                                                 cg(num(0), num(0), param("c2"), num(0))};
        };
        e.violation_outcome = "dependent";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.8";
        e.dim = 2;
        e.cls = StructureClass::NonAbelian;
        e.basis = {cg(num(0), num(0), num(0), num(1)), cg(k0, c1, c2, add(t, c3))};
        e.basis_text = "{z_(1), k0 v0 + x_(c1) + y_(c2) + z_(t + c3)}";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.9";
        e.dim = 2;
        e.cls = StructureClass::NonAbelian;
        e.basis = {cg(num(0), num(1), num(0), num(0)), cg(num(1), num(0), num(0), num(0))};
        e.basis_text = "{x_(1), v0}";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.10";
        e.dim = 2;
        e.cls = StructureClass::NonAbelian;
        e.basis = {cg(num(0), num(1), num(0), num(0)),
                   cg(k0, num(0), num(0), add(mul(sub(num(3), mul(num(6), k0)), t), c3))};
        e.basis_text = "{x_(1), k0 v0 + z_((3 - 6 k0) t + c3)}";
        e.constraint_text = "(k0 - 1/2)^2 + c3^2 != 0";
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(1), num(0), num(0)),
                                                 cg(frac(1, 2), num(0), num(0), num(0))};
        };
        e.violation_outcome = "collapses:L2.9";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.11";
        e.dim = 2;
        e.cls = StructureClass::NonAbelian;
        e.basis = {cg(num(0), num(0), num(1), num(0)), cg(num(1), num(0), c2, num(0))};
        e.basis_text = "{y_(1), v0 + y_(c2)}";
        out.push_back(e);
    }
    {
        CanonicalEntry e;
        e.id = "L2.12";
        e.dim = 2;
        e.cls = StructureClass::NonAbelian;
        e.basis = {cg(num(0), num(0), num(1), num(0)),
                   cg(k0, num(0), c2,
                      add(mul(frac(3, 2), sub(num(1), k0), t), c3))};
        e.basis_text = "{y_(1), k0 v0 + y_(c2) + z_((3/2)(1 - k0) t + c3)}";
        e.constraint_text = "(k0 - 1)^2 + c3^2 != 0";
        e.violated_basis = [cg]() {
            return std::vector<CatalogGenerator>{cg(num(0), num(0), num(1), num(0)),
                                                 cg(num(1), num(0), param("c2"), num(0))};
        };
        e.violation_outcome = "collapses:L2.11";
        out.push_back(e);
    }
    return out;
}

// bracket = lambda * V1 for a nonzero rational lambda
inline std::optional<Rational> proportionality(const VectorField& br, const VectorField& v1) {
    for (auto& coord : {std::string("t"), std::string("x"), std::string("y")}) {
        Expr c1 = v1.coeff(coord);
        if (is_zero(c1) == ZeroStatus::Zero) continue;
        auto lam = as_rational_constant(div(br.coeff(coord), c1));
        if (!lam) return std::nullopt;
        VectorField scaled = vf_scale(v1, num(*lam));
        if (vf_equal(br, scaled)) return lam;
        return std::nullopt;
    }
    return std::nullopt;
}

// linear dependence over constants: every 2x2 minor of the coefficient matrix
// vanishes identically
inline bool is_dependent(const VectorField& v1, const VectorField& v2) {
    std::vector<Expr> a{v1.coeff("t"), v1.coeff("x"), v1.coeff("y"), v1.phi};
    std::vector<Expr> b{v2.coeff("t"), v2.coeff("x"), v2.coeff("y"), v2.phi};
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (!is_zero_strict(sub(mul(a[i], b[j]), mul(a[j], b[i])))) return false;
    return true;
}

inline CheckResult verify_canonical_structure(const CanonicalEntry& e) {
    Stopwatch sw;
    CheckResult r = CheckResult::pass("catalog." + e.id, e.basis_text);
    r.note(std::string("class: ") + (e.cls == StructureClass::Abelian ? "abelian" : "nonabelian") +
           (e.constraint_text.empty() ? "" : "; constraint: " + e.constraint_text));
    for (auto& f : e.flags) r.note(f);
    if (e.dim == 1) {
        if (vf_is_zero(e.basis[0].field())) {
            r.status = Status::Fail;
            r.residual = "zero basis vector";
        }
        r.ms = sw.ms();
        return r;
    }
    VectorField v1 = e.basis[0].field();
    VectorField v2 = e.basis[1].field();
    VectorField br = zk_commutator(v1, v2);
    if (e.cls == StructureClass::Abelian) {
        if (!vf_is_zero(br)) {
            r.status = Status::Fail;
            r.residual = "nonzero bracket: xi_x = " + nf_to_string(normalize(br.coeff("x")));
        }
    } else {
        auto lam = proportionality(br, v1);
        if (!lam || lam->is_zero()) {
            r.status = Status::Fail;
            r.residual = "bracket is not a nonzero multiple of V1";
        } else if (!(*lam == Rational(1))) {
            r.note("bracket = " + lam->to_string() + " V1; basis rescaling V2 -> V2/" +
                   lam->to_string() + " gives [V1,V2] = V1");
        }
    }
    // constraint activity
    if (e.violated_basis) {
        VectorField w1 = e.violated_basis()[0].field();
        VectorField w2 = e.violated_basis()[1].field();
        if (e.violation_outcome == "dependent") {
            if (!is_dependent(w1, w2)) {
                r.status = Status::Fail;
                r.residual = "constraint violation did not degrade the basis";
            } else {
                r.note("constraint active: violating it makes the basis dependent");
            }
        } else if (e.violation_outcome.rfind("collapses:", 0) == 0) {
            std::string other = e.violation_outcome.substr(10);
            r.note("constraint active: violating it collapses the family onto " + other);
            // collapse target checked by the caller-level tests
        }
    }
    r.ms = sw.ms();
    return r;
}

// ---- linear first-order solver ---------------------------------------------------

// K' + p K = q, solved by an integrating factor mu with mu' = p mu. When
// p*A = a A' + b for an opaque atom A, mu = A^a exp(b Int(1/A, t)); otherwise
// mu = exp(Int(p, t)). Returns K with a free constant C.
struct LinearOdeSolution {
    Expr K;
    Expr mu;
    CheckResult residual_cert;
};

inline Expr integrating_factor(const Expr& p) {
    Expr t = sym("t");
    std::vector<Expr> candidates;
    for_each_node(p, [&](const Expr& n) {
        if (n->kind == Kind::Func && n->orders.size() == 1 && n->orders[0] == 0) {
            for (auto& c : candidates)
                if (same(c, n)) return;
            candidates.push_back(n);
        }
    });
    for (auto& A : candidates) {
        NormalForm pa = normalize(mul(p, A));
        Expr a1 = funcN(A->name, {A->orders[0] + 1}, A->args);
        // match pa == a * A' + b with rational a, b
        bool ok = true;
        Rational a(0), b(0);
        for (auto& [m, c] : pa.num) {
            if (m.f.empty()) {
                b = c;
            } else if (m.f.size() == 1 && same(m.f[0].first, a1) && m.f[0].second.is_one()) {
                a = c;
            } else {
                ok = false;
            }
        }
        if (!pa.den.empty()) ok = false;
        if (ok) {
            Expr mu = pow(A, a);
            if (!b.is_zero()) mu = mul(mu, expe(mul(num(b), integral(pow(A, Rational(-1)), "t"))));
            return mu;
        }
    }
    return expe(integral(p, "t"));
}

inline LinearOdeSolution solve_linear_first_order(const Expr& p, const Expr& q,
                                                  const std::string& id = "l1ode") {
    Stopwatch sw;
    Expr t = sym("t");
    LinearOdeSolution out;
    out.mu = integrating_factor(p);
    Expr C = param("C");
    out.K = mul(pow(out.mu, Rational(-1)), add(C, integral(mul(q, out.mu), "t")));
    Expr residual = add(partial_diff(out.K, t), mul(p, out.K), neg(q));
    CheckResult r = CheckResult::pass(id, "K' + p K = q solved by integrating factor");
    if (!is_zero_strict(residual)) {
        r.status = Status::Fail;
        r.residual = nf_to_string(normalize(residual));
    }
    r.ms = sw.ms();
    out.residual_cert = r;
    return out;
}

// ---- canonicalization --------------------------------------------------------------

struct AdjointStep {
    enum class Kind { AdX, AdY, BasisScale, ZNormalize } kind;
    Expr coeff = num(0);          // G or H for AdX / AdY (group parameter folded in)
    Rational scale = Rational(1); // BasisScale
    FamilyKind z_target = FamilyKind::Z;  // ZNormalize: which family coefficient goes to 1
    std::string describe() const {
        switch (kind) {
            case Kind::AdX: return "Ad(exp(x_G)), G = " + to_string(coeff);
            case Kind::AdY: return "Ad(exp(y_H)), H = " + to_string(coeff);
            case Kind::BasisScale: return "basis scale by " + scale.to_string();
            case Kind::ZNormalize: return "Ad(exp(eps z_K)) normalizing the coefficient to 1 (Neuman existence; closed form certified by its flow PDE and seed condition)";
        }
        return "";
    }
};

struct AdjointWord {
    std::vector<AdjointStep> steps;
    std::string entry_id;
    GenericGenerator family_form;  // exact landing point of the constructive steps
};

// Exact adjoint of a nilpotent step: Ad(exp(V)) v = v + [v,V] + [[v,V],V]/2 (+ 0).
inline VectorField apply_nilpotent_adjoint(const VectorField& v, const VectorField& V) {
    VectorField s1 = zk_commutator(v, V);
    VectorField s2 = zk_commutator(s1, V);
    VectorField s3 = zk_commutator(s2, V);
    if (!vf_is_zero(s3)) throw std::logic_error("adjoint series did not terminate");
    return vf_add(v, vf_add(s1, vf_scale(s2, frac(1, 2))));
}

inline VectorField apply_adjoint_word(const VectorField& v0field, const AdjointWord& w) {
    VectorField cur = v0field;
    for (auto& s : w.steps) {
        switch (s.kind) {
            case AdjointStep::Kind::AdX:
                cur = apply_nilpotent_adjoint(cur, gen_x(s.coeff));
                break;
            case AdjointStep::Kind::AdY:
                cur = apply_nilpotent_adjoint(cur, gen_y(s.coeff));
                break;
            case AdjointStep::Kind::BasisScale:
                cur = vf_scale(cur, num(s.scale));
                break;
            case AdjointStep::Kind::ZNormalize:
                // abstract step; the landing point is certified separately
                break;
        }
    }
    return cur;
}

// Branch selection per the classification: k0 = f = 0 lands in the x or y
// family; otherwise the x and y parts are eliminated by solvable-ODE adjoint
// steps, landing on k0 v0 + z_f.
inline AdjointWord canonicalize(const GenericGenerator& v) {
    Expr t = sym("t");
    bool fz = is_zero_strict(v.f);
    bool gz = is_zero_strict(v.g);
    bool hz = is_zero_strict(v.h);
    if (v.k0.is_zero() && fz && gz && hz)
        throw std::invalid_argument("canonicalize: zero vector");
    AdjointWord w;
    if (v.k0.is_zero() && fz) {
        if (hz) {
            w.entry_id = "L1.1";
            w.family_form = GenericGenerator{Rational(0), v.g, num(0), num(0)};
            AdjointStep zn;
            zn.kind = AdjointStep::Kind::ZNormalize;
            zn.z_target = FamilyKind::X;
            w.steps.push_back(zn);
            return w;
        }
        if (!gz) {
            // kill the x part: x-coefficient after Ad(exp(y_H)) is
            // g + (h H' - h' H)/2
            Expr p = neg(div(partial_diff(v.h, t), v.h));
            Expr q = neg(div(mul(num(2), v.g), v.h));
            LinearOdeSolution sol = solve_linear_first_order(p, q, "canon.ystep");
            Bindings pin;
            pin.symbols["C"] = num(0);
            AdjointStep st;
            st.kind = AdjointStep::Kind::AdY;
            st.coeff = substitute(sol.K, pin);
            w.steps.push_back(st);
        }
        w.entry_id = "L1.2";
        w.family_form = GenericGenerator{Rational(0), num(0), v.h, num(0)};
        AdjointStep zn;
        zn.kind = AdjointStep::Kind::ZNormalize;
        zn.z_target = FamilyKind::Y;
        w.steps.push_back(zn);
        return w;
    }
    // k0^2 + f^2 != 0
    VectorField cur = make_generator(v);
    if (!hz) {
        AdjointStep st;
        st.kind = AdjointStep::Kind::AdY;
        if (fz) {
            // y part of [v, y_H] is -k0 H
            st.coeff = div(v.h, num(v.k0));
        } else {
            // h + (f H' - (k0 + (2/3) f') H) = 0
            Expr p = neg(div(add(num(v.k0), mul(frac(2, 3), partial_diff(v.f, t))), v.f));
            Expr q = neg(div(v.h, v.f));
            LinearOdeSolution sol = solve_linear_first_order(p, q, "canon.ystep");
            Bindings pin;
            pin.symbols["C"] = num(0);
            st.coeff = substitute(sol.K, pin);
        }
        w.steps.push_back(st);
        cur = apply_nilpotent_adjoint(cur, gen_y(st.coeff));
    }
    GenericGenerator mid = recognize(cur);
    if (!is_zero_strict(mid.g)) {
        AdjointStep st;
        st.kind = AdjointStep::Kind::AdX;
        if (fz) {
            // x part of [v, x_G] is -2 k0 G
            st.coeff = div(mid.g, num(Rational(2) * v.k0));
        } else {
            // g1 + (f G' - (2 k0 + (1/3) f') G) = 0
            Expr p = neg(div(add(num(Rational(2) * v.k0), mul(frac(1, 3), partial_diff(v.f, t))), v.f));
            Expr q = neg(div(mid.g, v.f));
            LinearOdeSolution sol = solve_linear_first_order(p, q, "canon.xstep");
            Bindings pin;
            pin.symbols["C"] = num(0);
            st.coeff = substitute(sol.K, pin);
        }
        w.steps.push_back(st);
    }
    w.family_form = GenericGenerator{v.k0, num(0), num(0), v.f};
    if (fz) {
        w.entry_id = "L1.3";
        if (!(v.k0 == Rational(1))) {
            AdjointStep sc;
            sc.kind = AdjointStep::Kind::BasisScale;
            sc.scale = Rational(1) / v.k0;
            w.steps.push_back(sc);
            w.family_form.k0 = Rational(1);
        }
    } else {
        w.entry_id = "L1.4";
        AdjointStep zn;
        zn.kind = AdjointStep::Kind::ZNormalize;
        zn.z_target = FamilyKind::Z;
        w.steps.push_back(zn);
    }
    return w;
}

// Replay: apply the constructive steps and require a componentwise-zero
// landing on the family form; the final normalization carries its own
// flow-PDE + seed certificate.
inline CheckResult canonicalize_replay(const GenericGenerator& v, const std::string& id) {
    Stopwatch sw;
    AdjointWord w = canonicalize(v);
    VectorField landed = apply_adjoint_word(make_generator(v), w);
    VectorField family = make_generator(w.family_form);
    CheckResult r = CheckResult::pass(id, "canonicalization lands on " + w.entry_id);
    if (!vf_equal(landed, family)) {
        r.status = Status::Fail;
        std::string diff;
        for (auto& c : {std::string("t"), std::string("x"), std::string("y")})
            diff += c + ": " + nf_to_string(normalize(sub(landed.coeff(c), family.coeff(c)))) + "; ";
        r.residual = diff;
        r.ms = sw.ms();
        return r;
    }
    // nonequivalence witnesses preserved by the constructive steps
    GenericGenerator after = recognize(landed);
    bool scale_step = false;
    for (auto& s : w.steps) scale_step |= s.kind == AdjointStep::Kind::BasisScale;
    if (!scale_step && !(after.k0 == v.k0)) {
        r.status = Status::Fail;
        r.residual = "adjoint step changed the k0 invariant";
    }
    if (is_zero_strict(v.f) != is_zero_strict(after.f)) {
        r.status = Status::Fail;
        r.residual = "adjoint step changed the f = 0 flag";
    }
    r.note("entry " + w.entry_id + "; " + std::to_string(w.steps.size()) + " steps");
    r.ms = sw.ms();
    return r;
}

}  // namespace zk
