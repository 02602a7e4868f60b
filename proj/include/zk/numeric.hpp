#pragma once

// IEEE-double (and complex) evaluation of expressions under a numeric
// assignment: symbols and jet coordinates get values, opaque function atoms
// get polynomial stand-ins (derivatives taken exactly from the coefficients),
// antiderivative atoms are integrated adaptively from a fixed base point,
// algebraic atoms take the principal root.

#include "zk/normal_form.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace zk {

struct SingularSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericAssignment {
    std::map<std::string, double> symbols;              // variables, parameters, jets (by printed name)
    std::map<std::string, std::vector<double>> funcs;   // function name -> polynomial coefficients
    double quad_rel_tol = 1e-12;
    double quad_base_point = 1.0;

    double lookup(const std::string& key) const {
        auto it = symbols.find(key);
        if (it == symbols.end()) throw SingularSample("no value for '" + key + "'");
        return it->second;
    }
};

namespace detail {

inline double poly_eval_deriv(const std::vector<double>& coeffs, int order, double x) {
    // exact `order`-th derivative of the stand-in polynomial (degrees are tiny)
    double r = 0;
    double xp = 1;
    for (size_t n = static_cast<size_t>(order); n < coeffs.size(); ++n) {
        double fall = 1;
        for (int k = 0; k < order; ++k) fall *= static_cast<double>(n - k);
        r += coeffs[n] * fall * xp;
        xp *= x;
    }
    return r;
}

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static double from_double(double v) { return v; }
    static double pow_rat(double base, const Rational& e) {
        if (e.is_integer()) return std::pow(base, static_cast<double>(e.num().to_ll()));
        if (base < 0) {
            long long q = e.den().to_ll();
            if (q % 2 == 0) throw SingularSample("even root of a negative value");
            double r = std::pow(-base, e.to_double());
            long long p = e.num().to_ll();
            return (p % 2 == 0) ? r : -r;
        }
        return std::pow(base, e.to_double());
    }
    static double exp(double v) { return std::exp(v); }
    static double log(double v) {
        if (v <= 0) throw SingularSample("log of a non-positive value");
        return std::log(v);
    }
    static double root(double v, int n) {
        if (n % 2 == 0) {
            if (v < 0) throw SingularSample("even root of a negative value");
            return std::pow(v, 1.0 / n);
        }
        return v < 0 ? -std::pow(-v, 1.0 / n) : std::pow(v, 1.0 / n);
    }
    static bool bad(double v) { return !std::isfinite(v); }
    static double abs(double v) { return std::fabs(v); }
};

template <>
struct ScalarOps<std::complex<double>> {
    using C = std::complex<double>;
    static C from_double(double v) { return C(v, 0); }
    static C pow_rat(C base, const Rational& e) { return std::pow(base, e.to_double()); }
    static C exp(C v) { return std::exp(v); }
    static C log(C v) { return std::log(v); }
    static C root(C v, int n) { return std::pow(v, 1.0 / n); }
    static bool bad(C v) { return !std::isfinite(v.real()) || !std::isfinite(v.imag()); }
    static double abs(C v) { return std::abs(v); }
};

template <class S>
class Evaluator {
public:
    Evaluator(const NumericAssignment& a) : a_(a) {}

    S eval(const Expr& e) {
        switch (e->kind) {
            case Kind::Number:
                return ScalarOps<S>::from_double(e->number.to_double());
            case Kind::Symbol:
                return ScalarOps<S>::from_double(a_.lookup(e->name));
            case Kind::Jet:
                return ScalarOps<S>::from_double(a_.lookup(jet_key(e)));
            case Kind::Func: {
                auto it = a_.funcs.find(e->name);
                if (it == a_.funcs.end()) throw SingularSample("no stand-in for '" + e->name + "'");
                if (e->args.size() != 1)
                    throw SingularSample("multi-argument stand-in not provided for '" + e->name + "'");
                S arg = eval(e->args[0]);
                // polynomial stand-ins are evaluated on the real part for complex mode
                double x = real_part(arg);
                return ScalarOps<S>::from_double(poly_eval_deriv(it->second, e->orders[0], x));
            }
            case Kind::Integral: {
                double hi = a_.lookup(e->name);
                return ScalarOps<S>::from_double(quad(e->args[0], e->name, a_.quad_base_point, hi));
            }
            case Kind::Algebraic: {
                S v = eval(e->args[0]);
                S r = ScalarOps<S>::root(v, e->root_n);
                if (ScalarOps<S>::bad(r)) throw SingularSample("bad algebraic root");
                return r;
            }
            case Kind::Exp:
                return ScalarOps<S>::exp(eval(e->args[0]));
            case Kind::Log:
                return ScalarOps<S>::log(eval(e->args[0]));
            case Kind::Sum: {
                S r = ScalarOps<S>::from_double(0);
                for (auto& t : e->args) r += eval(t);
                return r;
            }
            case Kind::Product: {
                S r = ScalarOps<S>::from_double(1);
                for (auto& t : e->args) r *= eval(t);
                return r;
            }
            case Kind::Power: {
                S b = eval(e->args[0]);
                S r = ScalarOps<S>::pow_rat(b, e->number);
                if (ScalarOps<S>::bad(r)) throw SingularSample("bad power");
                return r;
            }
        }
        return ScalarOps<S>::from_double(0);
    }

private:
    const NumericAssignment& a_;

    static double real_part(double v) { return v; }
    static double real_part(std::complex<double> v) { return v.real(); }

    double quad(const Expr& integrand, const std::string& var, double a, double b) {
        NumericAssignment inner = a_;
        auto f = [&](double x) {
            inner.symbols[var] = x;
            Evaluator<double> ev(inner);
            double v = ev.eval(integrand);
            if (!std::isfinite(v)) throw SingularSample("singular integrand");
            return v;
        };
        if (a == b) return 0;
        double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        return simpson(f, a, b, fa, fb, fm, whole, a_.quad_rel_tol, 40);
    }

    template <class F>
    static double simpson(F&& f, double a, double b, double fa, double fb, double fm,
                          double whole, double tol, int depth) {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
        double delta = left + right - whole;
        double scale = std::max(1.0, std::fabs(left + right));
        if (depth <= 0) throw SingularSample("quadrature failed to converge");
        if (std::fabs(delta) <= 15 * tol * scale) return left + right + delta / 15.0;
        return simpson(f, a, m, fa, fm, flm, left, tol, depth - 1) +
               simpson(f, m, b, fm, fb, frm, right, tol, depth - 1);
    }
};

}  // namespace detail

inline double eval_numeric(const Expr& e, const NumericAssignment& a) {
    detail::Evaluator<double> ev(a);
    return ev.eval(e);
}

inline std::complex<double> eval_complex(const Expr& e, const NumericAssignment& a) {
    detail::Evaluator<std::complex<double>> ev(a);
    return ev.eval(e);
}

// ---- random assignments and the numeric fallback protocol ----------------------

struct AtomInventory {
    std::set<std::string> symbols;  // variables + parameters
    std::set<std::string> jets;     // printed jet names
    std::set<std::string> funcs;    // opaque function names
};

inline AtomInventory collect_atoms(const Expr& e) {
    AtomInventory inv;
    for_each_node(e, [&](const Expr& n) {
        if (n->kind == Kind::Symbol) inv.symbols.insert(n->name);
        if (n->kind == Kind::Jet) inv.jets.insert(jet_key(n));
        if (n->kind == Kind::Func) inv.funcs.insert(n->name);
        if (n->kind == Kind::Integral) inv.symbols.insert(n->name);
    });
    return inv;
}

// Stand-ins per the fallback protocol: random degree-3 polynomials with
// coefficients in [-2,2] away from zero.
inline std::vector<double> random_poly(std::mt19937_64& rng, int degree = 3) {
    std::uniform_real_distribution<double> mag(0.25, 2.0);
    std::bernoulli_distribution flip(0.5);
    std::vector<double> c;
    for (int i = 0; i <= degree; ++i) c.push_back(flip(rng) ? mag(rng) : -mag(rng));
    return c;
}

inline NumericAssignment random_assignment(const AtomInventory& inv, std::mt19937_64& rng) {
    NumericAssignment a;
    std::uniform_real_distribution<double> su(0.35, 2.1);
    std::uniform_real_distribution<double> ju(-2.0, 2.0);
    for (auto& s : inv.symbols) a.symbols[s] = su(rng);
    for (auto& j : inv.jets) a.symbols[j] = ju(rng);
    for (auto& f : inv.funcs) a.funcs[f] = random_poly(rng);
    return a;
}

struct NumericCheck {
    bool pass = false;
    double max_abs = 0;
    double max_rel = 0;
    int samples_used = 0;
    int singular_skips = 0;
};

// Magnitude scale: sum of |term| over the numerator monomials, over |den|.
inline double eval_scale(const NormalForm& f, const NumericAssignment& a) {
    double s = 0;
    for (auto& [m, c] : f.num) {
        Expr t = Normalizer::mono_to_expr(m, c);
        s += std::fabs(eval_numeric(t, a));
    }
    double d = std::fabs(eval_numeric(Normalizer::den_to_expr(f.den), a));
    if (d == 0) throw SingularSample("zero denominator at sample");
    return s / d;
}

// Randomized fallback protocol: `instantiations` independent function
// stand-ins, `samples` sample points each, relative tolerance against the
// expression-magnitude scale.
inline NumericCheck numeric_zero_check(const Expr& e, uint64_t seed, int instantiations = 5,
                                       int samples = 100, double rel_tol = 1e-9) {
    NumericCheck out;
    NormalForm f = normalize(e);
    if (f.is_zero()) {
        out.pass = true;
        return out;
    }
    AtomInventory inv = collect_atoms(Normalizer::to_expr(f));
    std::mt19937_64 rng(seed);
    for (int inst = 0; inst < instantiations; ++inst) {
        NumericAssignment base;
        for (auto& fn : inv.funcs) base.funcs[fn] = random_poly(rng);
        int taken = 0, guard = 0;
        while (taken < samples) {
            if (++guard > samples * 20) throw SingularSample("too many singular samples");
            NumericAssignment a = base;
            std::uniform_real_distribution<double> su(0.35, 2.1);
            std::uniform_real_distribution<double> ju(-2.0, 2.0);
            for (auto& s : inv.symbols) a.symbols[s] = su(rng);
            for (auto& j : inv.jets) a.symbols[j] = ju(rng);
            try {
                double v = eval_numeric(Normalizer::to_expr(f), a);
                double scale = std::max(1.0, eval_scale(f, a));
                double rel = std::fabs(v) / scale;
                out.max_abs = std::max(out.max_abs, std::fabs(v));
                out.max_rel = std::max(out.max_rel, rel);
                ++taken;
            } catch (const SingularSample&) {
                ++out.singular_skips;
            }
        }
        out.samples_used += taken;
    }
    out.pass = out.max_rel <= rel_tol;
    return out;
}

}  // namespace zk
