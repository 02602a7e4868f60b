#pragma once

// Jet-space machinery: total derivatives, second prolongation of point vector
// fields, and the on-shell symmetry criterion.

#include "zk/numeric.hpp"
#include "zk/report.hpp"

namespace zk {

struct JetSpace {
    std::vector<std::string> indep;  // e.g. {t, x, y} or {z}
    std::string dep;                 // u or w
    int max_order = 2;

    bool has_indep(const std::string& v) const {
        for (auto& i : indep)
            if (i == v) return true;
        return false;
    }

    // all multi-indices with 1 <= |J| <= max_order, sorted form
    std::vector<std::vector<std::string>> multi_indices() const {
        std::vector<std::vector<std::string>> out;
        std::vector<std::vector<std::string>> level{{}};
        for (int o = 1; o <= max_order; ++o) {
            std::vector<std::vector<std::string>> next;
            for (auto& j : level)
                for (auto& v : indep) {
                    auto k = j;
                    k.push_back(v);
                    std::sort(k.begin(), k.end());
                    next.push_back(k);
                }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            for (auto& j : next) out.push_back(j);
            level = next;
        }
        return out;
    }
};

// collect jet atoms of the space's dependent variable present in e
inline std::vector<Expr> jets_in(const Expr& e, const JetSpace& js) {
    std::vector<Expr> out;
    for_each_node(e, [&](const Expr& n) {
        if (n->kind != Kind::Jet || n->dep != js.dep) return;
        for (auto& j : out)
            if (same(j, n)) return;
        out.push_back(n);
    });
    return out;
}

inline int max_jet_order(const Expr& e, const JetSpace& js) {
    int mo = -1;
    for (auto& j : jets_in(e, js)) mo = std::max(mo, static_cast<int>(j->index.size()));
    return mo;
}

struct JetOrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// D_v e = d_v e + sum_J u_{J,v} * d_{u_J} e
inline Expr total_derivative(const Expr& e, const std::string& v, const JetSpace& js) {
    if (!js.has_indep(v)) throw std::invalid_argument("total_derivative: not an independent variable");
    std::vector<Expr> terms{partial_diff(e, sym(v))};
    for (auto& j : jets_in(e, js)) {
        if (static_cast<int>(j->index.size()) + 1 > js.max_order + 1)
            throw JetOrderError("total_derivative: jet order bound exceeded");
        auto idx = j->index;
        idx.push_back(v);
        Expr up = jet(js.dep, idx);
        Expr de = partial_diff(e, j);
        if (!is_num(de, Rational(0))) terms.push_back(mul(up, de));
    }
    return add(std::move(terms));
}

// Point vector field on base space: one coefficient per independent variable
// plus one for the dependent variable. Coefficients live on (base, dep).
struct VectorField {
    std::map<std::string, Expr> xi;  // indep var -> coefficient
    Expr phi = num(0);               // dep coefficient

    Expr coeff(const std::string& v) const {
        auto it = xi.find(v);
        return it == xi.end() ? num(0) : it->second;
    }

    // action on a function of (base, dep)
    Expr apply(const Expr& f, const JetSpace& js) const {
        std::vector<Expr> terms;
        for (auto& v : js.indep) terms.push_back(mul(coeff(v), partial_diff(f, sym(v))));
        terms.push_back(mul(phi, partial_diff(f, jet(js.dep, {}))));
        return add(std::move(terms));
    }
};

inline VectorField vf_add(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (auto& [v, c] : b.xi) r.xi[v] = add(r.coeff(v), c);
    r.phi = add(r.phi, b.phi);
    return r;
}
inline VectorField vf_scale(const VectorField& a, const Expr& c) {
    VectorField r;
    for (auto& [v, e] : a.xi) r.xi[v] = mul(c, e);
    r.phi = mul(c, a.phi);
    return r;
}
inline bool vf_is_zero(const VectorField& a) {
    for (auto& [v, e] : a.xi)
        if (is_zero(e) != ZeroStatus::Zero) return false;
    return is_zero(a.phi) == ZeroStatus::Zero;
}
inline bool vf_equal(const VectorField& a, const VectorField& b) {
    std::set<std::string> vars;
    for (auto& [v, e] : a.xi) vars.insert(v);
    for (auto& [v, e] : b.xi) vars.insert(v);
    for (auto& v : vars)
        if (!is_zero_strict(sub(a.coeff(v), b.coeff(v)))) return false;
    return is_zero_strict(sub(a.phi, b.phi));
}

// Lie bracket [a,b]^i = a(b^i) - b(a^i), computed on (base, dep) functions.
inline VectorField commutator(const VectorField& a, const VectorField& b, const JetSpace& js) {
    VectorField r;
    for (auto& v : js.indep) r.xi[v] = sub(a.apply(b.coeff(v), js), b.apply(a.coeff(v), js));
    r.phi = sub(a.apply(b.phi, js), b.apply(a.phi, js));
    return r;
}

struct ProlongedField {
    VectorField base;
    // multi-index (sorted, joined) -> coefficient; "" is the dep coefficient
    std::map<std::vector<std::string>, Expr> coeffs;
};

// Second prolongation via the characteristic Q = phi - sum xi^i u_i.
inline ProlongedField prolong2(const VectorField& v, const JetSpace& js) {
    JetSpace guard = js;
    guard.max_order = js.max_order + 1;  // transient third-order jets cancel
    ProlongedField out;
    out.base = v;
    std::vector<Expr> qterms{v.phi};
    for (auto& iv : js.indep) qterms.push_back(neg(mul(v.coeff(iv), jet(js.dep, {iv}))));
    Expr Q = add(std::move(qterms));
    for (auto& J : js.multi_indices()) {
        Expr dq = Q;
        for (auto& iv : J) dq = total_derivative(dq, iv, guard);
        std::vector<Expr> terms{dq};
        for (auto& iv : js.indep) {
            auto idx = J;
            idx.push_back(iv);
            terms.push_back(mul(v.coeff(iv), jet(js.dep, idx)));
        }
        out.coeffs[J] = add(std::move(terms));
    }
    out.coeffs[{}] = v.phi;
    return out;
}

// Independent recursive expansion (phi^{J,k} = D_k phi^J - sum D_k(xi^i) u_{J,i});
// used as the cross-check oracle for prolong2.
inline ProlongedField prolong2_recursive(const VectorField& v, const JetSpace& js) {
    JetSpace guard = js;
    guard.max_order = js.max_order + 1;
    ProlongedField out;
    out.base = v;
    out.coeffs[{}] = v.phi;
    std::vector<std::vector<std::string>> frontier{{}};
    for (int o = 1; o <= js.max_order; ++o) {
        std::vector<std::vector<std::string>> next;
        for (auto& J : frontier) {
            for (auto& k : js.indep) {
                auto idx = J;
                idx.push_back(k);
                std::sort(idx.begin(), idx.end());
                if (out.coeffs.count(idx)) continue;
                std::vector<Expr> terms{total_derivative(out.coeffs[J], k, guard)};
                for (auto& iv : js.indep) {
                    auto ji = J;
                    ji.push_back(iv);
                    terms.push_back(neg(mul(total_derivative(v.coeff(iv), k, guard), jet(js.dep, ji))));
                }
                out.coeffs[idx] = add(std::move(terms));
                next.push_back(idx);
            }
        }
        frontier = next;
    }
    return out;
}

// Equation in jet coordinates with an optional solved form for the leading
// derivative, used for on-shell substitution.
struct JetEquation {
    JetSpace space;
    Expr delta;
    Expr leading = nullptr;  // a jet atom
    Expr rhs = nullptr;

    // consistency: delta == (d delta / d leading) * (leading - rhs)
    bool solved_form_consistent() const {
        if (!leading) return true;
        Expr c = partial_diff(delta, leading);
        return is_zero_strict(sub(delta, mul(c, sub(leading, rhs))));
    }

    Expr on_shell(const Expr& e) const {
        if (!leading) return e;
        Bindings b;
        b.jets[jet_key(leading)] = rhs;
        return substitute(e, b);
    }
};

inline Expr pr2_apply(const ProlongedField& pv, const JetEquation& eq) {
    std::vector<Expr> terms;
    for (auto& iv : eq.space.indep)
        terms.push_back(mul(pv.base.coeff(iv), partial_diff(eq.delta, sym(iv))));
    for (auto& [J, c] : pv.coeffs) {
        Expr dd = partial_diff(eq.delta, jet(eq.space.dep, J));
        if (!is_num(dd, Rational(0))) terms.push_back(mul(c, dd));
    }
    return add(std::move(terms));
}

inline CheckResult is_symmetry(const VectorField& v, const JetEquation& eq, const std::string& id,
                               const std::string& anchor, uint64_t seed = 42) {
    Stopwatch sw;
    ProlongedField pv = prolong2(v, eq.space);
    Expr res = eq.on_shell(pr2_apply(pv, eq));
    NormalForm nf = normalize(res);
    CheckResult out = CheckResult::pass(id, anchor);
    switch (zero_status(nf)) {
        case ZeroStatus::Zero:
            break;
        case ZeroStatus::NonZero:
            out.status = Status::Fail;
            out.residual = nf_to_string(nf);
            break;
        case ZeroStatus::Unknown: {
            NumericCheck nc = numeric_zero_check(res, seed);
            out.mode = "numeric";
            out.max_abs = nc.max_abs;
            out.max_rel = nc.max_rel;
            if (nc.pass) {
                out.status = Status::AbstainedNumericPass;
                out.note("symbolic zero-test abstained (interacting algebraic atoms)");
            } else {
                out.status = Status::Fail;
                out.residual = nf_to_string(nf);
            }
            break;
        }
    }
    out.ms = sw.ms();
    return out;
}

}  // namespace zk
