#pragma once

// Immutable expression trees over exact rationals, symbols, jet coordinates,
// opaque function atoms, antiderivative atoms, algebraic atoms (single
// defining relation R^n = P), exponential and log atoms, sums, products and
// rational powers. Trees are values; all operations are pure.

#include "zk/rational.hpp"

#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace zk {

enum class Kind {
    Number,    // exact rational
    Symbol,    // variable or parameter
    Jet,       // derivative coordinate of a dependent variable, e.g. u_tx
    Func,      // opaque function atom F^{(k1,..,kn)}(a1,..,an)
    Integral,  // antiderivative atom Int(integrand, var)
    Algebraic, // atom R with R^n = P
    Exp,       // exp(arg)
    Log,       // ln(arg)
    Sum,
    Product,
    Power,     // base ^ rational
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    Kind kind;
    Rational number;                  // Number; Power exponent
    std::string name;                 // Symbol/Func/Integral(var)/Algebraic display
    bool is_param = false;            // Symbol role tag (no semantic difference)
    std::string dep;                  // Jet dependent variable name
    std::vector<std::string> index;   // Jet multi-index, sorted
    std::vector<int> orders;          // Func derivative orders per argument
    int root_n = 0;                   // Algebraic root degree
    std::vector<Expr> args;           // children / atom payloads
    size_t hash = 0;                  // structural; primary key of the total order

    explicit ExprNode(Kind k) : kind(k) {}
};

namespace detail {
inline size_t hash_mix(size_t h, size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
inline size_t hash_str(size_t h, const std::string& s) {
    for (char c : s) h = h * 1099511628211ULL + static_cast<unsigned char>(c);
    return h;
}
}  // namespace detail

inline Expr mk(ExprNode n) {
    // is_param is a presentation tag only; symbols compare by name
    size_t h = static_cast<size_t>(n.kind) * 0x9e3779b97f4a7c15ULL + 1;
    h = detail::hash_mix(h, n.number.hash());
    h = detail::hash_str(h, n.name);
    h = detail::hash_str(h, n.dep);
    for (auto& i : n.index) h = detail::hash_str(h + 5, i);
    for (int o : n.orders) h = detail::hash_mix(h, static_cast<size_t>(o) + 7);
    h = detail::hash_mix(h, static_cast<size_t>(n.root_n) + 11);
    for (auto& a : n.args) h = detail::hash_mix(h, a->hash);
    n.hash = h;
    return std::make_shared<const ExprNode>(std::move(n));
}

// ---- constructors ----------------------------------------------------------

inline Expr num(const Rational& r) {
    ExprNode n(Kind::Number);
    n.number = r;
    return mk(std::move(n));
}
inline Expr num(long long v) { return num(Rational(v)); }
inline Expr frac(long long p, long long q) { return num(Rational(p, q)); }

inline Expr sym(const std::string& name) {
    ExprNode n(Kind::Symbol);
    n.name = name;
    return mk(std::move(n));
}
inline Expr param(const std::string& name) {
    ExprNode n(Kind::Symbol);
    n.name = name;
    n.is_param = true;
    return mk(std::move(n));
}

inline Expr jet(const std::string& dep, std::vector<std::string> index) {
    ExprNode n(Kind::Jet);
    n.dep = dep;
    std::sort(index.begin(), index.end());
    n.index = std::move(index);
    return mk(std::move(n));
}

inline Expr funcN(const std::string& name, std::vector<int> orders, std::vector<Expr> args) {
    assert(orders.size() == args.size());
    ExprNode n(Kind::Func);
    n.name = name;
    n.orders = std::move(orders);
    n.args = std::move(args);
    return mk(std::move(n));
}
inline Expr func(const std::string& name, int order, Expr arg) {
    return funcN(name, {order}, {std::move(arg)});
}

inline Expr integral(Expr integrand, const std::string& var) {
    ExprNode n(Kind::Integral);
    n.name = var;
    n.args = {std::move(integrand)};
    return mk(std::move(n));
}

inline Expr algebraic(int root_n, Expr defining, const std::string& display = "") {
    assert(root_n >= 2);
    ExprNode n(Kind::Algebraic);
    n.root_n = root_n;
    n.args = {std::move(defining)};
    n.name = display;
    return mk(std::move(n));
}

inline Expr expe(Expr arg) {
    ExprNode n(Kind::Exp);
    n.args = {std::move(arg)};
    return mk(std::move(n));
}
inline Expr loge(Expr arg) {
    ExprNode n(Kind::Log);
    n.args = {std::move(arg)};
    return mk(std::move(n));
}

// Light structural simplification only; normalize() does the real work.
inline Expr add(std::vector<Expr> terms);
inline Expr mul(std::vector<Expr> factors);
inline Expr pow(Expr base, const Rational& e);

inline bool is_num(const Expr& e, const Rational& v) { return e->kind == Kind::Number && e->number == v; }

inline Expr add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Rational c(0);
    for (auto& t : terms) {
        if (!t) continue;
        if (t->kind == Kind::Sum) {
            for (auto& s : t->args) {
                if (s->kind == Kind::Number) c += s->number;
                else flat.push_back(s);
            }
        } else if (t->kind == Kind::Number) {
            c += t->number;
        } else {
            flat.push_back(t);
        }
    }
    if (!c.is_zero()) flat.push_back(num(c));
    if (flat.empty()) return num(0);
    if (flat.size() == 1) return flat[0];
    ExprNode n(Kind::Sum);
    n.args = std::move(flat);
    return mk(std::move(n));
}
template <class... Ts>
inline Expr add(Expr a, Expr b, Ts... rest) {
    return add(std::vector<Expr>{std::move(a), std::move(b), std::move(rest)...});
}
inline Expr sub(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), mul({num(-1), std::move(b)})}); }
inline Expr neg(Expr a) { return mul({num(-1), std::move(a)}); }

inline Expr mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Rational c(1);
    for (auto& t : factors) {
        if (!t) continue;
        if (t->kind == Kind::Product) {
            for (auto& s : t->args) {
                if (s->kind == Kind::Number) c *= s->number;
                else flat.push_back(s);
            }
        } else if (t->kind == Kind::Number) {
            c *= t->number;
        } else {
            flat.push_back(t);
        }
    }
    if (c.is_zero()) return num(0);
    if (!c.is_one()) flat.insert(flat.begin(), num(c));
    if (flat.empty()) return num(1);
    if (flat.size() == 1) return flat[0];
    ExprNode n(Kind::Product);
    n.args = std::move(flat);
    return mk(std::move(n));
}
template <class... Ts>
inline Expr mul(Expr a, Expr b, Ts... rest) {
    return mul(std::vector<Expr>{std::move(a), std::move(b), std::move(rest)...});
}
inline Expr div(Expr a, Expr b) { return mul(std::move(a), pow(std::move(b), Rational(-1))); }

inline Expr pow(Expr base, const Rational& e) {
    if (e.is_zero()) return num(1);
    if (e.is_one()) return base;
    if (base->kind == Kind::Number && e.is_integer() && base->number.sign() != 0)
        return num(base->number.pow_int(e.num().to_ll()));
    if (is_num(base, Rational(1))) return num(1);
    // (b^r)^k = b^(rk) is always sound for integer k
    if (base->kind == Kind::Power && e.is_integer())
        return pow(base->args[0], base->number * e);
    ExprNode n(Kind::Power);
    n.number = e;
    n.args = {std::move(base)};
    return mk(std::move(n));
}
inline Expr pow(Expr base, long long p, long long q = 1) { return pow(std::move(base), Rational(p, q)); }

// ---- structural order / equality -------------------------------------------

inline int cmp(const Expr& a, const Expr& b);

inline int cmp_vec(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
        if (int c = cmp(a[i], b[i])) return c;
    return 0;
}

inline int cmp(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
    if (a->kind != b->kind) return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    switch (a->kind) {
        case Kind::Number:
            if (a->number == b->number) return 0;
            return a->number < b->number ? -1 : 1;
        case Kind::Symbol:
            if (a->name != b->name) return a->name < b->name ? -1 : 1;
            return 0;
        case Kind::Jet:
            if (a->dep != b->dep) return a->dep < b->dep ? -1 : 1;
            if (a->index != b->index) return a->index < b->index ? -1 : 1;
            return 0;
        case Kind::Func:
            if (a->name != b->name) return a->name < b->name ? -1 : 1;
            if (a->orders != b->orders) return a->orders < b->orders ? -1 : 1;
            return cmp_vec(a->args, b->args);
        case Kind::Integral:
            if (a->name != b->name) return a->name < b->name ? -1 : 1;
            return cmp_vec(a->args, b->args);
        case Kind::Algebraic:
            if (a->root_n != b->root_n) return a->root_n < b->root_n ? -1 : 1;
            return cmp_vec(a->args, b->args);
        case Kind::Exp:
        case Kind::Log:
            return cmp_vec(a->args, b->args);
        case Kind::Power:
            if (int c = cmp(a->args[0], b->args[0])) return c;
            if (a->number == b->number) return 0;
            return a->number < b->number ? -1 : 1;
        case Kind::Sum:
        case Kind::Product:
            return cmp_vec(a->args, b->args);
    }
    return 0;
}

inline bool same(const Expr& a, const Expr& b) { return cmp(a, b) == 0; }

// print-friendly order: numbers first, then by kind and payload
inline int cmp_print(const Expr& a, const Expr& b);

inline int cmp_print_vec(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
        if (int c = cmp_print(a[i], b[i])) return c;
    return 0;
}

inline int cmp_print(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    switch (a->kind) {
        case Kind::Number:
            if (a->number == b->number) return 0;
            return a->number < b->number ? -1 : 1;
        case Kind::Symbol:
            return a->name < b->name ? -1 : (a->name == b->name ? 0 : 1);
        case Kind::Jet:
            if (a->dep != b->dep) return a->dep < b->dep ? -1 : 1;
            return a->index < b->index ? -1 : (a->index == b->index ? 0 : 1);
        case Kind::Func:
            if (a->name != b->name) return a->name < b->name ? -1 : 1;
            if (a->orders != b->orders) return a->orders < b->orders ? -1 : 1;
            return cmp_print_vec(a->args, b->args);
        case Kind::Power:
            if (int c = cmp_print(a->args[0], b->args[0])) return c;
            if (a->number == b->number) return 0;
            return a->number < b->number ? -1 : 1;
        default:
            return cmp_print_vec(a->args, b->args);
    }
}

// ---- printing ---------------------------------------------------------------

namespace detail {

inline bool needs_parens_in_product(const Expr& e) {
    return e->kind == Kind::Sum || (e->kind == Kind::Number && e->number.sign() < 0) ||
           (e->kind == Kind::Number && !e->number.is_integer());
}

inline void print_expr(std::ostringstream& os, const Expr& e);

inline void print_base(std::ostringstream& os, const Expr& e) {
    bool parens = e->kind == Kind::Sum || e->kind == Kind::Product ||
                  e->kind == Kind::Power ||
                  (e->kind == Kind::Number && (e->number.sign() < 0 || !e->number.is_integer()));
    if (parens) os << "(";
    print_expr(os, e);
    if (parens) os << ")";
}

inline void print_expr(std::ostringstream& os, const Expr& e) {
    switch (e->kind) {
        case Kind::Number:
            os << e->number.to_string();
            return;
        case Kind::Symbol:
            os << e->name;
            return;
        case Kind::Jet:
            os << e->dep;
            if (!e->index.empty()) {
                os << "_";
                for (auto& i : e->index) os << i;
            }
            return;
        case Kind::Func: {
            bool simple = e->args.size() == 1 && e->orders[0] <= 3 &&
                          e->args[0]->kind == Kind::Symbol;
            os << e->name;
            if (simple) {
                for (int k = 0; k < e->orders[0]; ++k) os << "'";
                // order-0 atoms keep the argument so they re-parse as atoms
                if (e->args[0]->name != "t" || e->orders[0] == 0) os << "(" << e->args[0]->name << ")";
                return;
            }
            os << "[";
            for (size_t i = 0; i < e->orders.size(); ++i) {
                if (i) os << ",";
                os << e->orders[i];
            }
            os << "](";
            for (size_t i = 0; i < e->args.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, e->args[i]);
            }
            os << ")";
            return;
        }
        case Kind::Integral:
            os << "Int(";
            print_expr(os, e->args[0]);
            os << ", " << e->name << ")";
            return;
        case Kind::Algebraic:
            os << "root(" << e->root_n << ", ";
            print_expr(os, e->args[0]);
            os << ")";
            return;
        case Kind::Exp:
            os << "exp(";
            print_expr(os, e->args[0]);
            os << ")";
            return;
        case Kind::Log:
            os << "ln(";
            print_expr(os, e->args[0]);
            os << ")";
            return;
        case Kind::Sum: {
            std::vector<Expr> ts = e->args;
            std::sort(ts.begin(), ts.end(), [](const Expr& a, const Expr& b) { return cmp_print(a, b) < 0; });
            for (size_t i = 0; i < ts.size(); ++i) {
                const Expr& t = ts[i];
                bool neg_term = false;
                Expr body = t;
                if (t->kind == Kind::Number && t->number.sign() < 0) {
                    neg_term = true;
                    body = num(-t->number);
                } else if (t->kind == Kind::Product && t->args[0]->kind == Kind::Number &&
                           t->args[0]->number.sign() < 0) {
                    neg_term = true;
                    std::vector<Expr> rest(t->args.begin() + 1, t->args.end());
                    Rational c = -t->args[0]->number;
                    body = c.is_one() ? mul(rest) : mul(num(c), mul(rest));
                }
                if (i == 0) {
                    if (neg_term) os << "-";
                } else {
                    os << (neg_term ? " - " : " + ");
                }
                if (body->kind == Kind::Sum) { os << "("; print_expr(os, body); os << ")"; }
                else print_expr(os, body);
            }
            return;
        }
        case Kind::Product: {
            std::vector<Expr> fs = e->args;
            std::sort(fs.begin(), fs.end(), [](const Expr& a, const Expr& b) { return cmp_print(a, b) < 0; });
            for (size_t i = 0; i < fs.size(); ++i) {
                if (i) os << "*";
                if (needs_parens_in_product(fs[i]) && i > 0) { os << "("; print_expr(os, fs[i]); os << ")"; }
                else if (fs[i]->kind == Kind::Sum) { os << "("; print_expr(os, fs[i]); os << ")"; }
                else print_expr(os, fs[i]);
            }
            return;
        }
        case Kind::Power: {
            print_base(os, e->args[0]);
            os << "^";
            if (e->number.is_integer() && e->number.sign() > 0) os << e->number.to_string();
            else os << "(" << e->number.to_string() << ")";
            return;
        }
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::ostringstream os;
    detail::print_expr(os, e);
    return os.str();
}

// ---- traversal utilities -----------------------------------------------------

template <class F>
inline void for_each_node(const Expr& e, F&& f) {
    f(e);
    for (auto& a : e->args) for_each_node(a, f);
}

inline bool contains_symbol(const Expr& e, const std::string& name) {
    bool found = false;
    for_each_node(e, [&](const Expr& n) {
        if (n->kind == Kind::Symbol && n->name == name) found = true;
    });
    return found;
}

inline bool contains_kind(const Expr& e, Kind k) {
    bool found = false;
    for_each_node(e, [&](const Expr& n) {
        if (n->kind == k) found = true;
    });
    return found;
}

// ---- substitution -------------------------------------------------------------

struct Bindings {
    // symbol name -> replacement
    std::map<std::string, Expr> symbols;
    // jet (dep + index) -> replacement; key is printed jet name like "u_tx"
    std::map<std::string, Expr> jets;
    // function name -> (argument variable, replacement expression in that variable);
    // order-k instances become the k-th derivative of the replacement
    std::map<std::string, std::pair<std::string, Expr>> funcs;
    // exact atom instance -> replacement (matched structurally)
    std::vector<std::pair<Expr, Expr>> atoms;
};

inline std::string jet_key(const Expr& e) {
    std::string k = e->dep;
    if (!e->index.empty()) {
        k += "_";
        for (auto& i : e->index) k += i;
    }
    return k;
}

Expr partial_diff(const Expr& e, const Expr& s);  // fwd

namespace detail {

inline void check_acyclic(const Bindings& b) {
    // substitution is simultaneous, so a value may mention its own key;
    // proper cycles between distinct keys are rejected
    auto value_mentions = [&](const std::string& self, const Expr& v) {
        std::set<std::string> names;
        for_each_node(v, [&](const Expr& n) {
            if (n->kind == Kind::Symbol && b.symbols.count(n->name)) names.insert("s:" + n->name);
            if (n->kind == Kind::Jet && b.jets.count(jet_key(n))) names.insert("j:" + jet_key(n));
            if (n->kind == Kind::Func && b.funcs.count(n->name)) names.insert("f:" + n->name);
        });
        names.erase(self);
        return names;
    };
    std::map<std::string, std::set<std::string>> g;
    for (auto& [k, v] : b.symbols) g["s:" + k] = value_mentions("s:" + k, v);
    for (auto& [k, v] : b.jets) g["j:" + k] = value_mentions("j:" + k, v);
    for (auto& [k, v] : b.funcs) g["f:" + k] = value_mentions("f:" + k, v.second);
    // DFS cycle detection
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
        state[n] = 1;
        for (auto& m : g[n]) {
            if (!g.count(m)) continue;
            if (state[m] == 1) return true;
            if (state[m] == 0 && dfs(m)) return true;
        }
        state[n] = 2;
        return false;
    };
    for (auto& [k, _] : g)
        if (state[k] == 0 && dfs(k)) throw std::invalid_argument("substitute: cyclic binding detected");
}

inline Expr subst_rec(const Expr& e, const Bindings& b) {
    for (auto& [atom, rep] : b.atoms)
        if (same(e, atom)) return rep;
    switch (e->kind) {
        case Kind::Number:
            return e;
        case Kind::Symbol: {
            auto it = b.symbols.find(e->name);
            return it == b.symbols.end() ? e : it->second;
        }
        case Kind::Jet: {
            auto it = b.jets.find(jet_key(e));
            return it == b.jets.end() ? e : it->second;
        }
        case Kind::Func: {
            auto it = b.funcs.find(e->name);
            if (it != b.funcs.end() && e->args.size() == 1 && e->args[0]->kind == Kind::Symbol &&
                e->args[0]->name == it->second.first) {
                Expr r = it->second.second;
                Expr v = sym(it->second.first);
                for (int k = 0; k < e->orders[0]; ++k) r = partial_diff(r, v);
                return r;
            }
            std::vector<Expr> as;
            as.reserve(e->args.size());
            for (auto& a : e->args) as.push_back(subst_rec(a, b));
            return funcN(e->name, e->orders, std::move(as));
        }
        case Kind::Integral:
            return integral(subst_rec(e->args[0], b), e->name);
        case Kind::Algebraic:
            return algebraic(e->root_n, subst_rec(e->args[0], b), e->name);
        case Kind::Exp:
            return expe(subst_rec(e->args[0], b));
        case Kind::Log:
            return loge(subst_rec(e->args[0], b));
        case Kind::Sum: {
            std::vector<Expr> as;
            as.reserve(e->args.size());
            for (auto& a : e->args) as.push_back(subst_rec(a, b));
            return add(std::move(as));
        }
        case Kind::Product: {
            std::vector<Expr> as;
            as.reserve(e->args.size());
            for (auto& a : e->args) as.push_back(subst_rec(a, b));
            return mul(std::move(as));
        }
        case Kind::Power:
            return pow(subst_rec(e->args[0], b), e->number);
    }
    return e;
}

}  // namespace detail

inline Expr substitute(const Expr& e, const Bindings& b) {
    detail::check_acyclic(b);
    return detail::subst_rec(e, b);
}

inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbol_bindings) {
    Bindings b;
    b.symbols = symbol_bindings;
    return substitute(e, b);
}

// ---- differentiation ----------------------------------------------------------

// Partial derivative with respect to a symbol or a jet coordinate.
inline Expr partial_diff(const Expr& e, const Expr& s) {
    assert(s->kind == Kind::Symbol || s->kind == Kind::Jet);
    switch (e->kind) {
        case Kind::Number:
            return num(0);
        case Kind::Symbol:
            return same(e, s) ? num(1) : num(0);
        case Kind::Jet:
            return same(e, s) ? num(1) : num(0);
        case Kind::Func: {
            std::vector<Expr> terms;
            for (size_t i = 0; i < e->args.size(); ++i) {
                Expr da = partial_diff(e->args[i], s);
                if (is_num(da, Rational(0))) continue;
                std::vector<int> o = e->orders;
                o[i] += 1;
                terms.push_back(mul(funcN(e->name, std::move(o), e->args), da));
            }
            return add(std::move(terms));
        }
        case Kind::Integral:
            // d/dvar Int(F, var) = F; opaque in every other direction
            if (s->kind == Kind::Symbol && s->name == e->name) return e->args[0];
            return num(0);
        case Kind::Algebraic: {
            // R^n = P  =>  R' = P' R^{1-n} / n
            Expr dp = partial_diff(e->args[0], s);
            if (is_num(dp, Rational(0))) return num(0);
            return mul(frac(1, e->root_n), dp, pow(e, Rational(1 - e->root_n)));
        }
        case Kind::Exp: {
            Expr da = partial_diff(e->args[0], s);
            if (is_num(da, Rational(0))) return num(0);
            return mul(da, e);
        }
        case Kind::Log: {
            Expr da = partial_diff(e->args[0], s);
            if (is_num(da, Rational(0))) return num(0);
            return div(da, e->args[0]);
        }
        case Kind::Sum: {
            std::vector<Expr> ts;
            ts.reserve(e->args.size());
            for (auto& a : e->args) ts.push_back(partial_diff(a, s));
            return add(std::move(ts));
        }
        case Kind::Product: {
            std::vector<Expr> ts;
            for (size_t i = 0; i < e->args.size(); ++i) {
                Expr d = partial_diff(e->args[i], s);
                if (is_num(d, Rational(0))) continue;
                std::vector<Expr> fs;
                for (size_t j = 0; j < e->args.size(); ++j) fs.push_back(i == j ? d : e->args[j]);
                ts.push_back(mul(std::move(fs)));
            }
            return add(std::move(ts));
        }
        case Kind::Power: {
            Expr db = partial_diff(e->args[0], s);
            if (is_num(db, Rational(0))) return num(0);
            return mul(num(e->number), pow(e->args[0], e->number - Rational(1)), db);
        }
    }
    return num(0);
}

inline Expr partial_diff(const Expr& e, const std::string& symbol_name) {
    return partial_diff(e, sym(symbol_name));
}

inline Expr diff_n(Expr e, const Expr& s, int n) {
    for (int i = 0; i < n; ++i) e = partial_diff(e, s);
    return e;
}

}  // namespace zk
