#include <doctest.h>

#include "zk/rational.hpp"

#include <random>

using namespace zk;

TEST_CASE("bigint arithmetic basics") {
    BigInt a(123456789), b(-987654321);
    CHECK((a + b).to_string() == "-864197532");
    CHECK((a * b).to_string() == "-121932631112635269");
    CHECK((b / a).to_string() == "-8");
    CHECK((b % a).to_string() == "-9");
    CHECK(BigInt::from_string("36288").to_string() == "36288");
    CHECK(BigInt::gcd(BigInt(36288), BigInt(672)).to_string() == "672");
}

TEST_CASE("bigint matches int128 on random small operands") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> d(-1000000000LL, 1000000000LL);
    for (int i = 0; i < 500; ++i) {
        long long x = d(rng), y = d(rng);
        __int128 p = static_cast<__int128>(x) * y;
        BigInt bp = BigInt(x) * BigInt(y);
        __int128 q = p;
        std::string want;
        bool neg = q < 0;
        if (neg) q = -q;
        if (q == 0) want = "0";
        while (q) {
            want.push_back(static_cast<char>('0' + static_cast<int>(q % 10)));
            q /= 10;
        }
        if (neg) want.push_back('-');
        std::reverse(want.begin(), want.end());
        CHECK(bp.to_string() == want);
        if (y != 0) {
            CHECK((BigInt(x) / BigInt(y)).to_string() == std::to_string(x / y));
            CHECK((BigInt(x) % BigInt(y)).to_string() == std::to_string(x % y));
        }
    }
}

TEST_CASE("exact roots") {
    CHECK(BigInt(23328).exact_root(3) == std::nullopt);
    CHECK(BigInt(27).exact_root(3)->to_string() == "3");
    CHECK(Rational(4, 9).exact_root(2)->to_string() == "2/3");
    CHECK(Rational(2).exact_root(2) == std::nullopt);
}

TEST_CASE("rational normalization and arithmetic") {
    Rational a(6, -4);
    CHECK(a.to_string() == "-3/2");
    CHECK((a + Rational(1, 2)).to_string() == "-1");
    CHECK((a * a).to_string() == "9/4");
    CHECK((Rational(90) / Rational(1296)).to_string() == "5/72");
    CHECK(Rational(-35, 36288).pow_int(2).to_string() == "25/26873856");
    CHECK(Rational(2, 3) < Rational(3, 4));
}
