#pragma once

// Recursive-descent parser for the expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')* base ('^' exponent)?
//   base   := number | jet | ident primes callargs? | 'Int(' expr ',' ident ')'
//           | 'exp(' expr ')' | 'ln(' expr ')' | 'root(' int ',' expr ')' | '(' expr ')'
//   jet    := 'u' '_' [txy]+ | 'w' '_' [rz]+
// Primes on 'w' denote z-derivatives (one-variable reduced equations); primes
// on any other identifier denote derivative order of a function atom of t.
// The printer emits this grammar; parse(print(e)) == e up to normalize.

#include "zk/expr.hpp"

#include <cctype>

namespace zk {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

class Parser {
public:
    explicit Parser(std::string text) : s_(std::move(text)) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+')) e = add(e, term());
            else if (eat('-')) e = sub(e, term());
            else return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (eat('*')) e = mul(e, factor());
            else if (eat('/')) e = div(e, factor());
            else return e;
        }
    }

    Expr factor() {
        if (eat('-')) return neg(factor());
        if (eat('+')) return factor();
        Expr b = base();
        if (eat('^')) return pow(b, exponent());
        return b;
    }

    Rational exponent() {
        if (eat('(')) {
            bool negative = eat('-');
            Rational r = rational_literal();
            if (negative) r = -r;
            expect(')');
            return r;
        }
        return rational_literal();
    }

    Rational rational_literal() {
        BigInt p = integer_literal();
        size_t save = pos_;
        if (eat('/')) {
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                BigInt q = integer_literal();
                return Rational(p, q);
            }
            pos_ = save;
        }
        return Rational(p, BigInt(1));
    }

    BigInt integer_literal() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected number", pos_);
        return BigInt::from_string(s_.substr(start, pos_ - start));
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw ParseError("expected identifier", pos_);
        return s_.substr(start, pos_ - start);
    }

    Expr base() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return num(rational_literal());
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError("expected expression", pos_);

        size_t id_pos = pos_;
        std::string name = ident();

        // jet coordinates u_tx / w_rz
        auto us = name.find('_');
        if (us != std::string::npos) {
            std::string dep = name.substr(0, us);
            std::string idx = name.substr(us + 1);
            std::string allowed = dep == "u" ? "txy" : (dep == "w" ? "rz" : "");
            if (!allowed.empty() && !idx.empty()) {
                bool ok = true;
                for (char i : idx)
                    if (allowed.find(i) == std::string::npos) ok = false;
                if (ok) {
                    std::vector<std::string> index;
                    for (char i : idx) index.emplace_back(1, i);
                    return jet(dep, std::move(index));
                }
            }
            throw ParseError("unknown jet coordinate '" + name + "'", id_pos);
        }

        if (name == "Int") {
            expect('(');
            Expr integrand = expr();
            expect(',');
            std::string var = ident();
            expect(')');
            return integral(integrand, var);
        }
        if (name == "exp") {
            expect('(');
            Expr a = expr();
            expect(')');
            return expe(a);
        }
        if (name == "ln") {
            expect('(');
            Expr a = expr();
            expect(')');
            return loge(a);
        }
        if (name == "root") {
            expect('(');
            BigInt n = integer_literal();
            expect(',');
            Expr p = expr();
            expect(')');
            if (!n.fits_ll() || n.to_ll() < 2) throw ParseError("unknown atom class: root degree", id_pos);
            return algebraic(static_cast<int>(n.to_ll()), p);
        }

        int primes = 0;
        while (peek() == '\'') { ++pos_; ++primes; }

        // multi-argument function atom: name[k1,k2](a1, a2)
        if (peek() == '[') {
            ++pos_;
            std::vector<int> orders;
            for (;;) {
                BigInt k = integer_literal();
                orders.push_back(static_cast<int>(k.to_ll()));
                if (!eat(',')) break;
            }
            expect(']');
            expect('(');
            std::vector<Expr> args;
            for (;;) {
                args.push_back(expr());
                if (!eat(',')) break;
            }
            expect(')');
            if (args.size() != orders.size()) throw ParseError("argument count mismatch", id_pos);
            return funcN(name, std::move(orders), std::move(args));
        }

        if (peek() == '(') {
            ++pos_;
            Expr a = expr();
            expect(')');
            return func(name, primes, a);
        }

        if (primes > 0) {
            if (name == "u")
                throw ParseError("unknown jet coordinate: primes on u", id_pos);
            if (name == "w") {
                std::vector<std::string> index(static_cast<size_t>(primes), "z");
                return jet("w", std::move(index));
            }
            // prime notation on a plain identifier: function of t
            return func(name, primes, sym("t"));
        }

        if (name == "u" || name == "w") return jet(name, {});
        return sym(name);
    }
};

inline Expr parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace zk
