#pragma once

// Exact arbitrary-precision integers and rationals. Magnitudes in this
// project stay small (structure constants, cleared denominators), so a
// plain base-2^32 schoolbook implementation is enough.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { neg_ = true; }
        unsigned long long m = neg_ ? 0ULL - static_cast<unsigned long long>(v)
                                    : static_cast<unsigned long long>(v);
        while (m) { d_.push_back(static_cast<uint32_t>(m & 0xffffffffULL)); m >>= 32; }
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) { neg = s[i] == '-'; ++i; }
        if (i == s.size()) throw std::invalid_argument("BigInt: empty literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r = r.mul_small(10);
            r = r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        r.neg_ = neg && !r.is_zero();
        return r;
    }

    bool is_zero() const { return d_.empty(); }
    bool negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    bool fits_ll() const {
        if (d_.size() > 2) return false;
        unsigned long long m = mag_ll();
        return neg_ ? m <= 0x8000000000000000ULL : m < 0x8000000000000000ULL;
    }
    long long to_ll() const {
        unsigned long long m = mag_ll();
        return neg_ ? -static_cast<long long>(m) : static_cast<long long>(m);
    }

    friend BigInt operator-(const BigInt& a) {
        BigInt r = a;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.d_ = add_mag(a.d_, b.d_);
            r.neg_ = a.neg_ && !r.d_.empty();
            return r;
        }
        int c = cmp_mag(a.d_, b.d_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) { r.d_ = sub_mag(a.d_, b.d_); r.neg_ = a.neg_; }
        else       { r.d_ = sub_mag(b.d_, a.d_); r.neg_ = b.neg_; }
        if (r.d_.empty()) r.neg_ = false;
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.d_.assign(a.d_.size() + b.d_.size(), 0);
        for (size_t i = 0; i < a.d_.size(); ++i) {
            unsigned long long carry = 0;
            for (size_t j = 0; j < b.d_.size(); ++j) {
                unsigned long long cur = r.d_[i + j] +
                    static_cast<unsigned long long>(a.d_[i]) * b.d_[j] + carry;
                r.d_[i + j] = static_cast<uint32_t>(cur & 0xffffffffULL);
                carry = cur >> 32;
            }
            size_t k = i + b.d_.size();
            while (carry) {
                unsigned long long cur = r.d_[k] + carry;
                r.d_[k] = static_cast<uint32_t>(cur & 0xffffffffULL);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.neg_ = (a.neg_ != b.neg_) && !r.is_zero();
        return r;
    }

    // Truncated toward zero, like C++ integer division.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        q = BigInt(); r = BigInt();
        q.d_.assign(a.d_.size(), 0);
        for (size_t i = a.d_.size(); i-- > 0;) {
            r = r.shl32();
            r = r.add_small(a.d_[i]);
            // binary search digit
            uint32_t lo = 0, hi = 0xffffffffu, digit = 0;
            while (lo <= hi) {
                uint32_t mid = lo + (hi - lo) / 2;
                BigInt t = b.abs().mul_small(mid);
                if (cmp_mag(t.d_, r.d_) <= 0) { digit = mid; lo = mid + 1; if (mid == 0xffffffffu) break; }
                else { if (mid == 0) break; hi = mid - 1; }
            }
            q.d_[i] = digit;
            r = r - b.abs().mul_small(digit);
        }
        q.trim(); r.trim();
        q.neg_ = (a.neg_ != b.neg_) && !q.is_zero();
        r.neg_ = a.neg_ && !r.is_zero();
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) { BigInt q, r; divmod(a, b, q, r); return q; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { BigInt q, r; divmod(a, b, q, r); return r; }

    friend bool operator==(const BigInt& a, const BigInt& b) { return a.neg_ == b.neg_ && a.d_ == b.d_; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_;
        int c = cmp_mag(a.d_, b.d_);
        return a.neg_ ? c > 0 : c < 0;
    }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return a < b || a == b; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return b <= a; }

    BigInt abs() const { BigInt r = *this; r.neg_ = false; return r; }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = b.neg_ = false;
        while (!b.is_zero()) { BigInt t = a % b; a = b; b = t; }
        return a;
    }

    BigInt pow_u(unsigned long long e) const {
        BigInt base = *this, acc(1);
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Exact integer n-th root if this is a perfect n-th power (of the magnitude).
    std::optional<BigInt> exact_root(unsigned n) const {
        if (n == 0) return std::nullopt;
        if (is_zero()) return BigInt(0);
        if (neg_) return std::nullopt;  // caller handles sign
        // Newton-ish search via binary search on the magnitude.
        BigInt lo(1), hi(2);
        while (hi.pow_u(n) < *this) hi = hi.mul_small(2);
        while (lo <= hi) {
            BigInt mid = (lo + hi).shr1();
            BigInt p = mid.pow_u(n);
            if (p == *this) return mid;
            if (p < *this) lo = mid + BigInt(1);
            else hi = mid - BigInt(1);
        }
        return std::nullopt;
    }

    double to_double() const {
        double m = 0;
        for (size_t i = d_.size(); i-- > 0;) m = m * 4294967296.0 + d_[i];
        return neg_ ? -m : m;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        BigInt t = abs();
        while (!t.is_zero()) {
            BigInt q, r;
            divmod(t, BigInt(10), q, r);
            out.push_back(static_cast<char>('0' + (r.is_zero() ? 0 : r.d_[0])));
            t = q;
        }
        if (neg_) out.push_back('-');
        std::reverse(out.begin(), out.end());
        return out;
    }

    size_t hash() const {
        size_t h = neg_ ? 0x9e3779b97f4a7c15ULL : 0;
        for (uint32_t w : d_) h = h * 1099511628211ULL + w;
        return h;
    }

private:
    std::vector<uint32_t> d_;  // little-endian, no leading zeros
    bool neg_ = false;

    unsigned long long mag_ll() const {
        unsigned long long m = 0;
        if (d_.size() > 0) m = d_[0];
        if (d_.size() > 1) m |= static_cast<unsigned long long>(d_[1]) << 32;
        return m;
    }
    void trim() { while (!d_.empty() && d_.back() == 0) d_.pop_back(); if (d_.empty()) neg_ = false; }
    BigInt mul_small(uint32_t v) const {
        BigInt r;
        unsigned long long carry = 0;
        for (uint32_t w : d_) {
            unsigned long long cur = static_cast<unsigned long long>(w) * v + carry;
            r.d_.push_back(static_cast<uint32_t>(cur & 0xffffffffULL));
            carry = cur >> 32;
        }
        while (carry) { r.d_.push_back(static_cast<uint32_t>(carry & 0xffffffffULL)); carry >>= 32; }
        r.trim();
        r.neg_ = neg_ && !r.is_zero();
        return r;
    }
    BigInt add_small(uint32_t v) const {
        BigInt r = *this;
        if (r.neg_) return *this + BigInt(static_cast<long long>(v));
        unsigned long long carry = v;
        for (size_t i = 0; i < r.d_.size() && carry; ++i) {
            unsigned long long cur = r.d_[i] + carry;
            r.d_[i] = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        if (carry) r.d_.push_back(static_cast<uint32_t>(carry));
        return r;
    }
    BigInt shl32() const {
        if (is_zero()) return *this;
        BigInt r = *this;
        r.d_.insert(r.d_.begin(), 0);
        return r;
    }
    BigInt shr1() const {
        BigInt r = *this;
        uint32_t carry = 0;
        for (size_t i = r.d_.size(); i-- > 0;) {
            uint32_t cur = r.d_[i];
            r.d_[i] = (cur >> 1) | (carry << 31);
            carry = cur & 1;
        }
        r.trim();
        return r;
    }
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r;
        r.reserve(std::max(a.size(), b.size()) + 1);
        unsigned long long carry = 0;
        for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
            unsigned long long cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(static_cast<uint32_t>(cur & 0xffffffffULL));
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<uint32_t>(carry));
        return r;
    }
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        long long borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            long long cur = static_cast<long long>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) { cur += 1LL << 32; borrow = 1; } else borrow = 0;
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

// Exact rational; invariant: den > 0, gcd(num, den) = 1, zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_ == BigInt(1) && num_ == BigInt(1); }
    bool is_integer() const { return den_ == BigInt(1); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

    Rational pow_int(long long e) const {
        if (e == 0) return Rational(1);
        if (e > 0) return Rational(num_.pow_u(static_cast<unsigned long long>(e)),
                                   den_.pow_u(static_cast<unsigned long long>(e)));
        if (is_zero()) throw std::domain_error("Rational: 0 to negative power");
        return Rational(den_.pow_u(static_cast<unsigned long long>(-e)),
                        num_.pow_u(static_cast<unsigned long long>(-e)));
    }

    // Exact q-th root when it exists (positive values; caller handles signs).
    std::optional<Rational> exact_root(unsigned q) const {
        if (sign() < 0) return std::nullopt;
        auto rn = num_.exact_root(q);
        auto rd = den_.exact_root(q);
        if (rn && rd) return Rational(*rn, *rd);
        return std::nullopt;
    }

    double to_double() const { return num_.to_double() / den_.to_double(); }

    std::string to_string() const {
        if (is_integer()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    size_t hash() const { return num_.hash() * 31 + den_.hash(); }

private:
    BigInt num_, den_;
    void reduce() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.negative()) { num_ = -num_; den_ = -den_; }
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) { num_ = num_ / g; den_ = den_ / g; }
    }
};

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace zk
