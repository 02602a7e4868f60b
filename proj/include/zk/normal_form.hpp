#pragma once

// Canonical normal form: an expression becomes a fraction whose numerator is
// an expanded sum of power-product monomials (exact rational coefficients,
// rational exponents) and whose denominator is a factored product of monic
// multi-term polynomials. Single-term denominators live inside the monomials
// as negative exponents. Atoms are totally ordered; powers of an algebraic
// atom reduce modulo its defining relation; exponential atoms are keyed by
// the rational ray of their argument. Zero-testing is the empty numerator.

#include "zk/expr.hpp"

#include <functional>
#include <map>

namespace zk {

struct NormalizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monomial: atoms sorted by cmp(), exponents nonzero.
struct Mono {
    std::vector<std::pair<Expr, Rational>> f;

    friend bool operator<(const Mono& a, const Mono& b) {
        size_t n = std::min(a.f.size(), b.f.size());
        for (size_t i = 0; i < n; ++i) {
            if (int c = cmp(a.f[i].first, b.f[i].first)) return c < 0;
            if (a.f[i].second != b.f[i].second) return a.f[i].second < b.f[i].second;
        }
        return a.f.size() < b.f.size();
    }
    friend bool operator==(const Mono& a, const Mono& b) {
        if (a.f.size() != b.f.size()) return false;
        for (size_t i = 0; i < a.f.size(); ++i)
            if (a.f[i].second != b.f[i].second || !same(a.f[i].first, b.f[i].first)) return false;
        return true;
    }
    bool empty() const { return f.empty(); }
};

using Poly = std::map<Mono, Rational>;

struct PolyLess {
    bool operator()(const Poly& a, const Poly& b) const {
        auto ia = a.begin(), ib = b.begin();
        for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
            if (ia->first < ib->first) return true;
            if (ib->first < ia->first) return false;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return a.size() < b.size();
    }
};

using DenMap = std::map<Poly, int, PolyLess>;

struct NormalForm {
    Poly num;
    DenMap den;  // monic multi-term factors with positive integer powers

    bool is_zero() const { return num.empty(); }
};

namespace nf {

inline Poly poly_const(const Rational& c) {
    Poly p;
    if (!c.is_zero()) p.emplace(Mono{}, c);
    return p;
}
inline Poly poly_one() { return poly_const(Rational(1)); }

inline bool poly_is_const(const Poly& p) {
    return p.empty() || (p.size() == 1 && p.begin()->first.empty());
}
inline Rational poly_const_value(const Poly& p) {
    return p.empty() ? Rational(0) : p.begin()->second;
}

inline void poly_accum(Poly& p, const Mono& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b) poly_accum(r, m, c);
    return r;
}

inline Poly poly_scale(const Poly& a, const Rational& c) {
    Poly r;
    if (c.is_zero()) return r;
    for (auto& [m, k] : a) r.emplace(m, k * c);
    return r;
}

inline Mono mono_mul_raw(const Mono& a, const Mono& b) {
    Mono r;
    size_t i = 0, j = 0;
    while (i < a.f.size() || j < b.f.size()) {
        if (j == b.f.size() || (i < a.f.size() && cmp(a.f[i].first, b.f[j].first) < 0)) {
            r.f.push_back(a.f[i++]);
        } else if (i == a.f.size() || cmp(b.f[j].first, a.f[i].first) < 0) {
            r.f.push_back(b.f[j++]);
        } else {
            Rational e = a.f[i].second + b.f[j].second;
            if (!e.is_zero()) r.f.emplace_back(a.f[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

inline Mono mono_invert(const Mono& m) {
    Mono r = m;
    for (auto& [a, e] : r.f) e = -e;
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) poly_accum(r, mono_mul_raw(ma, mb), ca * cb);
    return r;
}

inline Poly poly_mul_mono(const Poly& a, const Mono& m, const Rational& c) {
    Poly r;
    for (auto& [ma, ca] : a) r.emplace(mono_mul_raw(ma, m), ca * c);
    return r;
}

inline Poly poly_pow_uint(Poly base, unsigned long long e) {
    Poly acc = poly_one();
    while (e) {
        if (e & 1) acc = poly_mul(acc, base);
        base = poly_mul(base, base);
        e >>= 1;
    }
    return acc;
}

}  // namespace nf

class Normalizer {
public:
    // The memo persists across calls (keys are pinned so node addresses stay
    // valid); expression trees share subterms heavily across an analysis run.
    NormalForm run(const Expr& e) {
        depth_ = 0;
        NormalForm r = norm(e);
        return canonical(reduce(r));
    }

    // fraction arithmetic ------------------------------------------------

    static NormalForm nf_const(const Rational& c) { return {nf::poly_const(c), {}}; }

    // multiply a factor^power into the denominator; single-term factors fold
    // into the numerator monomials, constants fold into coefficients
    static void den_push(NormalForm& f, const Poly& factor, int power) {
        if (power == 0) return;
        if (factor.empty()) throw NormalizeError("normalize: division by zero");
        if (factor.size() == 1) {
            const Mono& m = factor.begin()->first;
            Rational c = factor.begin()->second;
            Mono inv = nf::mono_invert(m);
            Mono step = inv;
            Rational cs = Rational(1) / c;
            // apply power times (power can be negative: factor moves to num)
            int n = power >= 0 ? power : -power;
            Mono acc;
            Rational ca(1);
            for (int i = 0; i < n; ++i) {
                acc = nf::mono_mul_raw(acc, power > 0 ? step : m);
                ca = ca * (power > 0 ? cs : c);
            }
            f.num = nf::poly_mul_mono(f.num, acc, ca);
            return;
        }
        // monic canonicalization: 1/(c F_monic)^p scales the numerator by c^-p
        Rational lead = factor.begin()->second;
        Poly monic = lead.is_one() ? factor : nf::poly_scale(factor, Rational(1) / lead);
        if (!lead.is_one()) f.num = nf::poly_scale(f.num, lead.pow_int(-power));
        auto it = f.den.find(monic);
        int cur = it == f.den.end() ? 0 : it->second;
        int next = cur + power;
        if (it != f.den.end()) f.den.erase(it);
        if (next > 0) {
            f.den.emplace(std::move(monic), next);
        } else if (next < 0) {
            f.num = nf::poly_mul(f.num, nf::poly_pow_uint(monic, static_cast<unsigned>(-next)));
        }
    }

    static NormalForm nf_add(const NormalForm& a, const NormalForm& b) {
        if (a.num.empty()) return b;
        if (b.num.empty()) return a;
        NormalForm r;
        // lcm of the factored denominators
        r.den = a.den;
        for (auto& [fct, pw] : b.den) {
            auto it = r.den.find(fct);
            if (it == r.den.end()) r.den.emplace(fct, pw);
            else it->second = std::max(it->second, pw);
        }
        Poly an = a.num, bn = b.num;
        for (auto& [fct, pw] : r.den) {
            auto ia = a.den.find(fct);
            auto ib = b.den.find(fct);
            int ka = pw - (ia == a.den.end() ? 0 : ia->second);
            int kb = pw - (ib == b.den.end() ? 0 : ib->second);
            if (ka > 0) an = nf::poly_mul(an, nf::poly_pow_uint(fct, static_cast<unsigned>(ka)));
            if (kb > 0) bn = nf::poly_mul(bn, nf::poly_pow_uint(fct, static_cast<unsigned>(kb)));
        }
        r.num = nf::poly_add(an, bn);
        if (r.num.empty()) r.den.clear();
        return r;
    }

    static NormalForm nf_mul(const NormalForm& a, const NormalForm& b) {
        if (a.num.empty() || b.num.empty()) return nf_const(Rational(0));
        NormalForm r;
        r.num = nf::poly_mul(a.num, b.num);
        r.den = a.den;
        for (auto& [fct, pw] : b.den) {
            auto it = r.den.find(fct);
            if (it == r.den.end()) r.den.emplace(fct, pw);
            else it->second += pw;
        }
        return r;
    }

    static NormalForm nf_neg(const NormalForm& a) { return {nf::poly_scale(a.num, Rational(-1)), a.den}; }

    NormalForm nf_pow_int(const NormalForm& a, long long e) {
        if (e == 0) return nf_const(Rational(1));
        if (a.num.empty()) {
            if (e > 0) return nf_const(Rational(0));
            throw NormalizeError("normalize: zero raised to a negative power");
        }
        if (e > 0) {
            NormalForm r;
            r.num = nf::poly_pow_uint(a.num, static_cast<unsigned long long>(e));
            for (auto& [fct, pw] : a.den) r.den.emplace(fct, pw * static_cast<int>(e));
            return r;
        }
        // inversion: the numerator becomes a denominator factor and the
        // denominator factors move to the numerator
        long long k = -e;
        NormalForm r = nf_const(Rational(1));
        for (auto& [fct, pw] : a.den)
            r.num = nf::poly_mul(r.num, nf::poly_pow_uint(fct, static_cast<unsigned>(pw * k)));
        den_push(r, a.num, static_cast<int>(k));
        return r;
    }

    NormalForm nf_div(const NormalForm& a, const NormalForm& b) {
        if (b.num.empty()) throw NormalizeError("normalize: division by zero");
        return nf_mul(a, nf_pow_int(b, -1));
    }

    // expression reconstruction -------------------------------------------

    static Expr mono_to_expr(const Mono& m, const Rational& c) {
        std::vector<Expr> fs;
        if (!c.is_one() || m.f.empty()) fs.push_back(num(c));
        for (auto& [atom, e] : m.f) fs.push_back(pow(atom, e));
        return mul(std::move(fs));
    }

    static Expr poly_to_expr(const Poly& p) {
        if (p.empty()) return num(0);
        std::vector<Expr> ts;
        for (auto& [m, c] : p) ts.push_back(mono_to_expr(m, c));
        return add(std::move(ts));
    }

    static Expr den_to_expr(const DenMap& d) {
        std::vector<Expr> fs;
        for (auto& [fct, pw] : d) fs.push_back(pow(poly_to_expr(fct), Rational(pw)));
        return fs.empty() ? num(1) : mul(std::move(fs));
    }

    static Expr to_expr(const NormalForm& f) {
        Expr n = poly_to_expr(f.num);
        if (f.den.empty()) return n;
        return div(n, den_to_expr(f.den));
    }

private:
    std::map<const ExprNode*, NormalForm> memo_;
    std::vector<Expr> pinned_;
    int depth_ = 0;

    struct DepthGuard {
        int& d;
        explicit DepthGuard(int& dd) : d(dd) {
            if (++d > 128) throw NormalizeError("normalize: algebraic reduction depth exceeded");
        }
        ~DepthGuard() { --d; }
    };

    NormalForm norm(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        NormalForm r = norm_uncached(e);
        memo_.emplace(e.get(), r);
        pinned_.push_back(e);
        return r;
    }

    NormalForm atom_nf(const Expr& atom) {
        Mono m;
        m.f.emplace_back(atom, Rational(1));
        Poly p;
        p.emplace(std::move(m), Rational(1));
        return {std::move(p), {}};
    }

    Expr canonical_payload(const Expr& e) { return to_expr(canonical(reduce(norm(e)))); }

    NormalForm norm_uncached(const Expr& e) {
        switch (e->kind) {
            case Kind::Number:
                return nf_const(e->number);
            case Kind::Symbol:
            case Kind::Jet:
                return atom_nf(e);
            case Kind::Func: {
                std::vector<Expr> as;
                as.reserve(e->args.size());
                for (auto& a : e->args) as.push_back(canonical_payload(a));
                return atom_nf(funcN(e->name, e->orders, std::move(as)));
            }
            case Kind::Integral: {
                Expr payload = canonical_payload(e->args[0]);
                if (is_num(payload, Rational(0))) return nf_const(Rational(0));
                return atom_nf(integral(payload, e->name));
            }
            case Kind::Algebraic:
                return atom_nf(algebraic(e->root_n, canonical_payload(e->args[0]), e->name));
            case Kind::Log: {
                NormalForm a = canonical(reduce(norm(e->args[0])));
                if (a.is_zero()) throw NormalizeError("normalize: ln(0)");
                return atom_nf(loge(to_expr(a)));
            }
            case Kind::Exp: {
                NormalForm a = canonical(reduce(norm(e->args[0])));
                if (a.is_zero()) return nf_const(Rational(1));
                // key the atom by the rational ray of the argument
                Rational c = a.num.begin()->second;
                NormalForm scaled{nf::poly_scale(a.num, Rational(1) / c), a.den};
                Expr atom = expe(to_expr(scaled));
                Mono m;
                m.f.emplace_back(atom, c);
                Poly p;
                p.emplace(std::move(m), Rational(1));
                return {std::move(p), {}};
            }
            case Kind::Sum: {
                NormalForm acc = nf_const(Rational(0));
                for (auto& a : e->args) acc = nf_add(acc, norm(a));
                return acc;
            }
            case Kind::Product: {
                NormalForm acc = nf_const(Rational(1));
                for (auto& a : e->args) acc = nf_mul(acc, norm(a));
                return acc;
            }
            case Kind::Power:
                return power(norm(e->args[0]), e->number);
        }
        return nf_const(Rational(0));
    }

    // c^(p/q) decomposed into an exact rational part and an algebraic atom.
    NormalForm rational_power(const Rational& c, const Rational& r) {
        long long p = r.num().to_ll();
        long long q = r.den().to_ll();
        if (c.is_zero()) {
            if (p > 0) return nf_const(Rational(0));
            throw NormalizeError("normalize: zero raised to a negative power");
        }
        Rational mag = c.sign() < 0 ? -c : c;
        Rational sign_factor(1);
        if (c.sign() < 0) {
            if (q % 2 == 0)
                throw NormalizeError("normalize: even root of a negative rational");
            if (p % 2 != 0) sign_factor = Rational(-1);
        }
        if (auto root = mag.exact_root(static_cast<unsigned>(q)))
            return nf_const(sign_factor * root->pow_int(p));
        Expr atom = algebraic(static_cast<int>(q), num(mag));
        NormalForm a = atom_nf(atom);
        NormalForm pw = nf_pow_int(a, p);
        return nf_mul(nf_const(sign_factor), pw);
    }

    NormalForm power(const NormalForm& base0, const Rational& r) {
        DepthGuard g(depth_);
        NormalForm base = canonical(reduce(base0));
        if (r.is_integer()) return canonical(reduce(nf_pow_int(base, r.num().to_ll())));
        if (base.num.empty()) return nf_const(Rational(0));
        bool simple = base.num.size() == 1 && base.den.empty();
        if (simple) {
            NormalForm out = nf_const(Rational(1));
            const Mono& m = base.num.begin()->first;
            out = nf_mul(out, rational_power(base.num.begin()->second, r));
            for (auto& [atom, exp] : m.f) {
                Rational ne = exp * r;
                if (atom->kind == Kind::Algebraic && !ne.is_integer()) {
                    // R = P^{1/n}: fold the fractional power back through P
                    NormalForm pn = norm(atom->args[0]);
                    out = nf_mul(out, power(pn, ne / Rational(atom->root_n)));
                } else {
                    Mono single;
                    single.f.emplace_back(atom, ne);
                    Poly p;
                    p.emplace(std::move(single), Rational(1));
                    out = nf_mul(out, NormalForm{std::move(p), {}});
                }
            }
            return canonical(reduce(out));
        }
        // composite radicand: one defining relation per distinct radicand
        long long p = r.num().to_ll();
        long long q = r.den().to_ll();
        Expr atom = algebraic(static_cast<int>(q), to_expr(canonical(base)));
        NormalForm a = atom_nf(atom);
        NormalForm pw = nf_pow_int(a, p);
        return canonical(reduce(pw));
    }

    // Rewrite one pass of out-of-range algebraic-atom powers (R^n = P) as a
    // fraction; each term keeps its own relation-power denominator.
    NormalForm poly_reduce_nf(const Poly& p) {
        NormalForm acc = nf_const(Rational(0));
        for (auto& [m, c] : p) {
            bool rewritten = false;
            for (size_t i = 0; i < m.f.size() && !rewritten; ++i) {
                const Expr& atom = m.f[i].first;
                const Rational& exp = m.f[i].second;
                if (atom->kind != Kind::Algebraic) continue;
                if (!exp.is_integer())
                    throw NormalizeError("normalize: fractional power of algebraic atom");
                long long e = exp.num().to_ll();
                long long n = atom->root_n;
                if (e >= 0 && e < n) continue;
                long long qq = e >= 0 ? e / n : -((-e + n - 1) / n);
                long long rr = e - qq * n;  // in [0, n)
                Mono rest;
                for (size_t j = 0; j < m.f.size(); ++j) {
                    if (j == i) {
                        if (rr != 0) rest.f.emplace_back(atom, Rational(rr));
                    } else {
                        rest.f.push_back(m.f[j]);
                    }
                }
                DepthGuard g(depth_);
                NormalForm pk = nf_pow_int(norm(atom->args[0]), qq);
                Poly rp;
                rp.emplace(std::move(rest), c);
                acc = nf_add(acc, nf_mul(NormalForm{std::move(rp), {}}, pk));
                rewritten = true;
            }
            if (!rewritten) {
                Poly one_term;
                one_term.emplace(m, c);
                acc = nf_add(acc, NormalForm{std::move(one_term), {}});
            }
        }
        return acc;
    }

    static bool poly_needs_reduce(const Poly& p) {
        for (auto& [m, c] : p)
            for (auto& [atom, exp] : m.f)
                if (atom->kind == Kind::Algebraic &&
                    (!exp.is_integer() || exp.sign() < 0 || !(exp < Rational(atom->root_n))))
                    return true;
        return false;
    }

    NormalForm reduce(const NormalForm& f) {
        NormalForm cur = f;
        int rounds = 0;
        for (;;) {
            bool num_needs = poly_needs_reduce(cur.num);
            bool den_needs = false;
            for (auto& [fct, pw] : cur.den) den_needs |= poly_needs_reduce(fct);
            if (!num_needs && !den_needs) return cur;
            if (++rounds > 64) throw NormalizeError("normalize: algebraic reduction depth exceeded");
            NormalForm next = poly_reduce_nf(cur.num);
            for (auto& [fct, pw] : cur.den) {
                if (poly_needs_reduce(fct)) {
                    NormalForm rf = poly_reduce_nf(fct);
                    next = nf_div(next, nf_pow_int(rf, pw));
                } else {
                    den_push(next, fct, pw);
                }
            }
            cur = next;
        }
    }

    // den factors are monic at insertion and constants fold into coefficients,
    // so the only canonicalization left is dropping the denominator of zero
    static NormalForm canonical(const NormalForm& f) {
        if (f.num.empty()) return {Poly{}, {}};
        return f;
    }
};

inline NormalForm normalize(const Expr& e) {
    thread_local Normalizer n;
    return n.run(e);
}

inline Expr nf_to_expr(const NormalForm& f) { return Normalizer::to_expr(f); }

inline std::string nf_to_string(const NormalForm& f) { return to_string(Normalizer::to_expr(f)); }

// ---- zero testing -------------------------------------------------------------

enum class ZeroStatus { Zero, NonZero, Unknown };

inline int count_distinct_algebraic(const NormalForm& f, std::vector<Expr>* out = nullptr) {
    std::vector<Expr> atoms;
    auto visit_atom = [&](const Expr& atom) {
        for_each_node(atom, [&](const Expr& n) {
            if (n->kind != Kind::Algebraic) return;
            for (auto& a : atoms)
                if (same(a, n)) return;
            atoms.push_back(n);
        });
    };
    for (auto& [m, c] : f.num)
        for (auto& [atom, e] : m.f) visit_atom(atom);
    if (out) *out = atoms;
    return static_cast<int>(atoms.size());
}

inline ZeroStatus zero_status(const NormalForm& f) {
    if (f.is_zero()) return ZeroStatus::Zero;
    std::vector<Expr> atoms;
    int n = count_distinct_algebraic(f, &atoms);
    if (n == 0) return ZeroStatus::NonZero;
    if (n == 1) {
        // a single extension by an irreducible pure-rational relation is a field
        const Expr& a = atoms[0];
        if (a->args[0]->kind == Kind::Number && (a->root_n == 2 || a->root_n == 3)) {
            if (!a->args[0]->number.exact_root(static_cast<unsigned>(a->root_n)))
                return ZeroStatus::NonZero;
        }
    }
    return ZeroStatus::Unknown;
}

inline ZeroStatus is_zero(const Expr& e) { return zero_status(normalize(e)); }

inline bool is_zero_strict(const Expr& e) { return is_zero(e) == ZeroStatus::Zero; }

inline bool nf_equal(const Expr& a, const Expr& b) { return is_zero_strict(sub(a, b)); }

// Atoms inside normal forms carry canonicalized payloads; an externally
// constructed atom must be run through the same canonicalization before it can
// be compared against them.
inline Expr canonical_atom(const Expr& atom) {
    NormalForm f = normalize(atom);
    if (f.num.size() != 1 || f.num.begin()->first.f.size() != 1)
        throw NormalizeError("canonical_atom: not an atom");
    return f.num.begin()->first.f[0].first;
}

// Coefficient collection of the numerator with respect to one atom; requires
// the denominator to be free of that atom.
inline std::map<Rational, NormalForm> collect(const NormalForm& f, const Expr& atom) {
    for (auto& [fct, pw] : f.den)
        for (auto& [m, c] : fct)
            for (auto& [a, e] : m.f)
                if (same(a, atom)) throw NormalizeError("collect: atom occurs in denominator");
    std::map<Rational, NormalForm> buckets;
    for (auto& [m, c] : f.num) {
        Rational deg(0);
        Mono rest;
        for (auto& [a, e] : m.f) {
            if (same(a, atom)) deg = e;
            else rest.f.emplace_back(a, e);
        }
        auto it = buckets.find(deg);
        if (it == buckets.end()) {
            Poly p;
            p.emplace(rest, c);
            buckets.emplace(deg, NormalForm{std::move(p), f.den});
        } else {
            nf::poly_accum(it->second.num, rest, c);
        }
    }
    for (auto it = buckets.begin(); it != buckets.end();) {
        if (it->second.num.empty()) it = buckets.erase(it);
        else ++it;
    }
    return buckets;
}

}  // namespace zk
