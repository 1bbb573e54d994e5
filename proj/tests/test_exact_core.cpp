#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "cantor/expansion.hpp"
#include "cantor/real_bounds.hpp"

using namespace cantor;

namespace {

Rational R(long a, long b) { return make_rational(a, b); }

// Independent digit oracle: E_n = floor(Q_n x) - q_n floor(Q_{n-1} x), Q_n = q_1...q_n.
std::vector<Integer> oracle_digits(const Rational& x, const BasicSequence& Q, unsigned N) {
    std::vector<Integer> out;
    Integer prev = 0, prod = 1;
    for (unsigned n = 1; n <= N; ++n) {
        prod *= Q.q(n);
        Integer cur = floor_of(x * Rational(prod));
        out.push_back(cur - Q.q(n) * prev);
        prev = cur;
    }
    return out;
}

// Common-denominator sum, no Horner.
Rational oracle_value(const std::vector<Integer>& e, const BasicSequence& Q) {
    Integer D = Q.product(1, e.size());
    Integer num = 0;
    for (unsigned n = 1; n <= e.size(); ++n) num += e[n - 1] * (D / Q.product(1, n));
    return make_rational(num, D);
}

} // namespace

TEST_CASE("rational text round trip and parsing") {
    CHECK(to_text(R(5, 6)) == "5/6");
    CHECK(to_text(Rational(3)) == "3/1");
    CHECK(parse_rational(" -10/4 ") == R(-5, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("3/-6") == R(-1, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x/2"), DomainError);
}

TEST_CASE("fast comparison agrees with mpq_cmp") {
    std::vector<Rational> v;
    Integer big = 1;
    mpz_mul_2exp(big.get_mpz_t(), big.get_mpz_t(), 5000);
    Integer big3 = big * 3;
    for (long a : {-7L, -1L, 0L, 1L, 2L, 5L}) {
        v.push_back(R(a, 3));
        v.push_back(Rational(a) / Rational(big));
        v.push_back(make_rational(Integer(a) * big + 1, big * 2));
        v.push_back(make_rational(Integer(a) * big3 + 1, big3));
        v.push_back(make_rational(Integer(a) * big + 1, big3));
    }
    for (const auto& a : v)
        for (const auto& b : v) {
            int c = cmp(a, b);
            int want = c < 0 ? -1 : (c > 0 ? 1 : 0);
            CHECK(fast_cmp(a, b) == want);
        }
}

TEST_CASE("outward dyadic rounding brackets the value") {
    Rational x = R(1, 3);
    CHECK(round_down(x, 10) <= x);
    CHECK(round_up(x, 10) >= x);
    CHECK(round_up(x, 10) - round_down(x, 10) == R(1, 1024));
    CHECK(round_down(R(1, 4), 10) == R(1, 4));
}

TEST_CASE("log and sqrt enclosures contain the true value") {
    Enclosure l2 = log_bounds(Integer(2));
    // ln 2 = 0.69314718055994530941...
    CHECK(l2.lo < R(693147180559945310, 1000000000000000000L));
    CHECK(l2.hi > R(693147180559945309, 1000000000000000000L));
    CHECK(l2.width() < R(1, 1000000000));
    Enclosure s = sqrt_bounds(Enclosure(Rational(2)));
    CHECK(s.lo * s.lo <= 2);
    CHECK(s.hi * s.hi >= 2);
    CHECK(log_bounds(Integer(1)).exact());
    CHECK_THROWS_AS(log_bounds(Integer(0)), DomainError);
}

TEST_CASE("basic sequences") {
    auto Q = BasicSequence::successor();
    CHECK(Q.q(1) == 2);
    CHECK(Q.q(5) == 6);
    CHECK_THROWS_AS(Q.q(0), DomainError);
    CHECK(BasicSequence::power_of_two().q(10) == 1024);
    CHECK(BasicSequence::power_of_two().product(2, 4) == 512);
    CHECK(Q.product(1, 3) == 24);
    CHECK_THROWS_AS(BasicSequence::constant(1), DomainError);
    auto L = BasicSequence::list({2, 3});
    CHECK_THROWS_AS(L.q(3), RangeError);
}

TEST_CASE("growth index") {
    auto S = BasicSequence::successor();
    CHECK(growth_index(S, 3) == 2);
    CHECK(growth_index(S, 1) == 1);
    auto P = BasicSequence::power_of_two();
    CHECK(growth_index(P, 7) == 3);
    CHECK(P.q(2) < 7);
    CHECK(growth_index(P, Integer(1) << 0) == 1);
    CHECK(growth_index(BasicSequence::constant(10), 9) == 1);
    CHECK_THROWS_AS(growth_index(BasicSequence::constant(10), 11), UnsupportedError);
    CHECK_THROWS_AS(growth_index(BasicSequence::list({2, 3, 4}), 3), UnsupportedError);
    auto W = BasicSequence::list({2, 3, 4}).with_witness([](const Integer&) { return std::uint64_t(1); });
    CHECK(growth_index(W, 2) == 1);
    // property check over a finite range against the definition
    for (long t = 1; t <= 200; ++t) {
        auto m = growth_index(S, t);
        for (std::uint64_t j = m; j < m + 50; ++j) CHECK(S.q(j) >= t);
        if (m > 1) CHECK(S.q(m - 1) < t);
    }
}

TEST_CASE("digits_of examples") {
    auto Q = BasicSequence::successor();
    auto d = digits_of(R(5, 6), Q, 3);
    CHECK(d.digits() == std::vector<Integer>{1, 2, 0});
    CHECK(digits_of(0, Q, 4).digits() == std::vector<Integer>{0, 0, 0, 0});
    CHECK(digits_of(R(1, 2), Q, 2).digits() == std::vector<Integer>{1, 0});
    CHECK_THROWS_AS(digits_of(1, Q, 2), DomainError);
    CHECK_THROWS_AS(digits_of(R(-1, 3), Q, 2), DomainError);
}

TEST_CASE("value_of examples") {
    auto Q = BasicSequence::successor();
    CHECK(value_of(DigitPrefix(Q, {1, 2, 0})) == R(5, 6));
    CHECK(value_of(DigitPrefix(Q, {0, 0, 0})) == 0);
    CHECK(value_of(DigitPrefix(Q, {1, 0})) == R(1, 2));
    CHECK_THROWS_AS(DigitPrefix(Q, {2}), DomainError);
}

TEST_CASE("t_qn examples") {
    auto Q = BasicSequence::successor();
    CHECK(t_qn(R(5, 6), Q, 1) == R(2, 3));
    CHECK(t_qn(R(5, 6), Q, 2) == 0);
    CHECK(t_qn(R(5, 6), Q, 0) == R(5, 6));
    CHECK(t_qn(0, Q, 7) == 0);
}

TEST_CASE("t_qn_from_digits examples") {
    auto Q = BasicSequence::successor();
    auto d = digits_of(R(5, 6), Q, 3);
    auto e = t_qn_from_digits(d, 1, 2);
    CHECK(e.contains(R(2, 3)));
    CHECK(e.width() <= R(1, 12));
    auto z = t_qn_from_digits(DigitPrefix(Q, {0, 0, 0, 0}), 1, 3);
    CHECK(z.lo == 0);
    CHECK(z.hi == R(1, 60));
    // full remaining tail: lo equals the direct truncated tail sum
    auto x = R(17, 23);
    auto dx = digits_of(x, Q, 6);
    auto full = t_qn_from_digits(dx, 2, 4);
    Rational direct = Rational(dx.digit(3)) / 4 + Rational(dx.digit(4)) / 20 + Rational(dx.digit(5)) / 120 +
                      Rational(dx.digit(6)) / 840;
    CHECK(full.lo == direct);
    CHECK_THROWS_AS(t_qn_from_digits(dx, 3, 4), RangeError);
}

TEST_CASE("round trip, digit recursion, enclosure, refinement over many rationals") {
    std::vector<BasicSequence> qs = {BasicSequence::successor(), BasicSequence::power_of_two(),
                                     BasicSequence::constant(10), BasicSequence::list({3, 2, 7, 5, 2, 9, 4, 11, 2, 6})};
    for (const auto& Q : qs)
        for (long b = 1; b <= 37; b += 3)
            for (long a = 0; a < b; a += 2) {
                Rational x = R(a, b);
                const unsigned N = 9;
                auto d = digits_of(x, Q, N);
                CHECK(d.digits() == oracle_digits(x, Q, N));
                Rational v = value_of(d);
                CHECK(v == oracle_value(d.digits(), Q));
                CHECK(v <= x);
                CHECK(x < v + Rational(1) / Rational(Q.product(1, N)));
                for (unsigned n = 0; n + 1 <= N; ++n) {
                    Rational t = t_qn(x, Q, n);
                    CHECK(d.digit(n + 1) == floor_of(Rational(Q.q(n + 1)) * t));
                    // sandwich E_{n+1}/q_{n+1} <= T <= (E_{n+1}+1)/q_{n+1}
                    CHECK(Rational(d.digit(n + 1)) / Rational(Q.q(n + 1)) <= t);
                    CHECK(t <= Rational(d.digit(n + 1) + 1) / Rational(Q.q(n + 1)));
                    Rational prev_w = 2;
                    for (unsigned k = 1; n + k <= N; ++k) {
                        auto e = t_qn_from_digits(d, n, k);
                        CHECK(e.contains(t));
                        CHECK(e.width() <= prev_w);
                        prev_w = e.width();
                    }
                }
            }
}

TEST_CASE("digit CSV round trip and mismatch") {
    auto Q = BasicSequence::successor();
    auto d = digits_of(R(11, 13), Q, 8);
    std::stringstream ss;
    write_digits_csv(ss, d);
    auto back = read_digits_csv(ss, Q);
    CHECK(back.digits() == d.digits());
    std::stringstream bad("n,q_n,E_n\n1,3,0\n");
    CHECK_THROWS_AS(read_digits_csv(bad, Q), ConfigError);
}
