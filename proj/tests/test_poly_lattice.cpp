#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "cantor/polynomial.hpp"

using namespace cantor;

namespace {

IntPolynomial P(const char* s) { return IntPolynomial::parse(s); }

// Brute force value set of p on x = 0..xmax, restricted to [s, n], in plain 64-bit arithmetic.
std::set<long long> brute_values(const IntPolynomial& p, long long s, long long n, long long xmax) {
    std::set<long long> out;
    for (long long x = 0; x <= xmax; ++x) {
        long long v = 0;
        for (size_t i = p.coeffs().size(); i-- > 0;) v = v * x + p.coeffs()[i].get_si();
        if (v >= s && v <= n) out.insert(v);
    }
    return out;
}

Rational brute_density(const IntPolynomial& p, const IntPolynomial& q, long long s, long long n) {
    auto pv = brute_values(p, s, n, n + 10);
    auto qv = brute_values(q, s, n, n + 10);
    long long common = 0;
    for (auto v : qv) common += pv.count(v);
    return make_rational(common, static_cast<long>(qv.size()));
}

} // namespace

TEST_CASE("polynomial parsing and evaluation") {
    CHECK(P("X").is_identity());
    CHECK(P("X^2+1").coeffs() == std::vector<Integer>{1, 0, 1});
    CHECK(P("4*X^2 - 3X + 2").coeffs() == std::vector<Integer>{2, -3, 4});
    CHECK(P("X^2-2X-2").to_string() == "X^2-2X-2");
    CHECK(P("2X^3+X")(Integer(2)) == 18);
    CHECK_THROWS_AS(P("-X^2"), DomainError);
    CHECK_THROWS_AS(P("7"), DomainError);
    CHECK_THROWS_AS(P("X^"), DomainError);
    CHECK(IntPolynomial::from_json(P("X^3-X").to_json()) == P("X^3-X"));
}

TEST_CASE("certified threshold: increasing and positive beyond it") {
    for (const char* s : {"X", "X^2-10X+3", "X^3-7X^2-50", "2X^4-9X^3+X-8", "X^2+X+1"}) {
        auto p = P(s);
        Integer T = p.increasing_threshold();
        for (Integer x = T; x < T + 200; ++x) {
            CHECK(p(x) > 0);
            CHECK(p(x + 1) > p(x));
        }
    }
}

TEST_CASE("membership and value sets against brute force") {
    for (const char* s : {"X", "X^2", "X^2-10X+30", "X^3-7X^2+20", "2X^2+X", "X^2+3"}) {
        auto p = P(s);
        auto got = p.values_in(1, 3000);
        auto want = brute_values(p, 1, 3000, 3100);
        CHECK(got.size() == want.size());
        for (const auto& v : got) CHECK(want.count(v.get_si()) == 1);
        for (long v = 1; v <= 400; ++v) CHECK(p.takes_value(Integer(v)) == (brute_values(p, v, v, 500).size() == 1));
    }
}

TEST_CASE("intersection density examples") {
    CHECK(intersection_density(P("X"), P("X^2"), 1, 10000) == 1);
    CHECK(intersection_density(P("X^2"), P("X"), 1, 10000) == make_rational(1, 100));
    CHECK(intersection_density(P("X^3+X"), P("X^3+X"), 5, 900) == 1);
    CHECK_THROWS_AS(intersection_density(P("X^2"), P("X^2+1000"), 1, 10), DomainError);
    CHECK_THROWS_AS(intersection_density(P("X"), P("X"), 0, 10), DomainError);
}

TEST_CASE("intersection density matches brute force and is symmetric in the numerator") {
    std::vector<IntPolynomial> ps = {P("X"), P("X^2"), P("X^2+X"), P("2X^2"), P("X^3"), P("X^2+3"), P("4X^2-4X+1")};
    for (const auto& p : ps)
        for (const auto& q : ps)
            for (auto [s, n] : {std::pair<long, long>{1, 2000}, {37, 999}}) {
                Rational d = intersection_density(p, q, s, n);
                CHECK(d == brute_density(p, q, s, n));
                CHECK(d >= 0);
                CHECK(d <= 1);
                Rational d2 = intersection_density(q, p, s, n);
                auto qn = q.values_in(s, n).size(), pn = p.values_in(s, n).size();
                CHECK(d * Rational(static_cast<unsigned long>(qn)) == d2 * Rational(static_cast<unsigned long>(pn)));
            }
}

TEST_CASE("linear composition witness") {
    auto w = linear_composition_witness(P("X^2"), P("4X^2"), 4);
    REQUIRE(w);
    CHECK(w->mu_a == 2);
    CHECK(w->mu_b == 0);
    CHECK(w->la_a == 1);
    CHECK(w->la_b == 0);
    CHECK_FALSE(linear_composition_witness(P("X"), P("X^2"), 10));
    auto id = linear_composition_witness(P("X"), P("X"), 1);
    REQUIRE(id);
    CHECK(id->mu_a == 1);
    CHECK(id->la_a == 1);
    CHECK(id->mu_b == 0);
    CHECK(id->la_b == 0);
    CHECK_FALSE(linear_composition_witness(P("X^2"), P("X^2+1"), 4));
    CHECK_THROWS_AS(linear_composition_witness(P("X"), P("X"), 0), DomainError);
}

TEST_CASE("witness soundness on random compositions") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> co(-3, 3), lin(1, 3);
    for (int it = 0; it < 150; ++it) {
        unsigned deg = 1 + rng() % 3;
        std::vector<Integer> c(deg + 1);
        for (auto& x : c) x = co(rng);
        c[deg] = lin(rng);
        IntPolynomial p(c);
        long a = lin(rng), b = co(rng);
        // q = p o (aX + b), built by Horner on integers
        std::vector<Integer> q{c[deg]};
        for (unsigned i = deg; i-- > 0;) {
            std::vector<Integer> nq(q.size() + 1, 0);
            for (size_t j = 0; j < q.size(); ++j) {
                nq[j + 1] += q[j] * a;
                nq[j] += q[j] * b;
            }
            nq[0] += c[i];
            q = nq;
        }
        IntPolynomial qq(q);
        auto w = linear_composition_witness(p, qq, 4);
        REQUIRE(w);
        CHECK(verify_witness(p, qq, *w));
    }
}

TEST_CASE("composition reducibility") {
    CHECK(composition_reducible(P("X^2"), P("X^4")));
    CHECK(composition_reducible(P("X^2+1"), P("X^4+2X^2+2")));
    CHECK(composition_reducible(P("X^2"), P("X^2+2X+1")));
    CHECK_FALSE(composition_reducible(P("X^2"), P("X^2+1")));
    CHECK_FALSE(composition_reducible(P("X^2"), P("X^4+1")));
}

TEST_CASE("tengely bound") {
    // independent floating evaluation of the formula
    auto approx = [](double m, double n, double d, double h) {
        return std::pow(d, 2 * m * m / d - m) * std::pow(m + 1, 3 * m / (2 * d)) * std::pow(m / d + 1, 3 * m / 2) *
               std::pow(h + 1, (m * m + m * n + m) / d + 2 * m);
    };
    CHECK(approx(2, 2, 2, 1) == doctest::Approx(16384 * std::sqrt(27.0)));
    Integer b = tengely_bound(2, 2, 2, 1);
    CHECK(b == static_cast<long>(std::ceil(approx(2, 2, 2, 1))));
    CHECK(b == 85134);
    CHECK(tengely_bound(2, 2, 2, 2) > b);
    for (unsigned m : {2u, 4u})
        for (unsigned n : {2u, 4u})
            for (unsigned h : {1u, 2u, 3u}) {
                if (n > m) continue;
                Integer t = tengely_bound(m, n, 2, h);
                double want = std::ceil(approx(m, n, 2, h));
                CHECK(t.get_d() == doctest::Approx(want).epsilon(1e-9));
            }
    CHECK_THROWS_AS(tengely_bound(3, 2, 2, 1), DomainError);
    CHECK_THROWS_AS(tengely_bound(2, 2, 2, 0), DomainError);
    CHECK_THROWS_AS(tengely_bound(4, 2, 4, 1), DomainError);
    CHECK(tengely_bound(P("X^2"), P("X^2+1"), 2) == 85134);
    CHECK_THROWS_AS(tengely_bound(P("2X^2"), P("X^2+1"), 2), DomainError);
}

TEST_CASE("pair certificates") {
    auto c = pair_bound_certificate(P("X"), P("X^2"));
    CHECK(c.route == PairCertificate::Route::Identity);
    CHECK(c.num == P("X^2"));
    for (unsigned long m = 1; m <= 10; ++m) CHECK(c.N(m) == Integer(8 * m * m));
    auto t = pair_bound_certificate(P("X^2"), P("X^2+3"));
    CHECK(t.route == PairCertificate::Route::Tengely);
    for (unsigned long m = 1; m <= 8; ++m) CHECK(t.N(m) == ceil_of(Rational(t.M) / Rational(Integer(m))));
    CHECK_THROWS_AS(pair_bound_certificate(P("X"), P("X")), UnsupportedError);
    CHECK_THROWS_AS(pair_bound_certificate(P("X^2"), P("X^3")), UnsupportedError);
    CHECK_THROWS_AS(pair_bound_certificate(P("X^2"), P("X^4")), UnsupportedError);
    CHECK_THROWS_AS(pair_bound_certificate(P("X"), P("2X+1")), UnsupportedError);
}

TEST_CASE("certificate soundness, sampled windows") {
    std::vector<std::pair<IntPolynomial, IntPolynomial>> pairs = {
        {P("X"), P("X^2")}, {P("X"), P("X^3")}, {P("X"), P("2X^2+X")}, {P("X"), P("X^2-5X+7")}, {P("X^2"), P("X^2+3")}};
    for (const auto& [p, q] : pairs) {
        auto c = pair_bound_certificate(p, q);
        for (unsigned long m = 1; m <= 8; ++m) {
            Integer N = c.N(m);
            for (const Integer& len : {Integer(N + 1), Integer(2 * N)})
                for (long s : {1L, 2L, 50L, 1000L}) {
                    Integer n = len + s;
                    if (c.den.values_in(s, n).empty()) continue;
                    CHECK(intersection_density(c.num, c.den, s, n) < make_rational(1, static_cast<long>(m)));
                }
        }
    }
}

TEST_CASE("explicit polyset builder") {
    auto s1 = build_explicit_polyset(1);
    REQUIRE(s1.polys.size() == 1);
    CHECK(s1.polys[0].is_identity());
    auto s3 = build_explicit_polyset(3);
    REQUIRE(s3.polys.size() == 2);
    CHECK(s3.polys[0] == P("X"));
    CHECK(s3.polys[1] == P("X^2"));
    const auto& cert = s3.certificates[1][0];
    for (unsigned long m = 1; m <= 8; ++m) CHECK(cert.N(m) == Integer(8 * m * m));
    // empirical density bound for sampled n with n - 1 > N(m)
    for (unsigned long m = 1; m <= 8; ++m) {
        Integer n = cert.N(m) + 2;
        CHECK(intersection_density(cert.num, cert.den, 1, n) < make_rational(1, static_cast<long>(m)));
    }
    // adjacent members: later one is sparse inside the earlier one
    Rational prev = 1;
    for (long n : {100L, 10000L, 1000000L}) {
        Rational down = intersection_density(s3.polys[1], s3.polys[0], 1, n);
        CHECK(down < prev);
        prev = down;
        CHECK(intersection_density(s3.polys[0], s3.polys[1], 1, n) == 1);
    }
    CHECK(s3.to_json()["polys"].size() == 2);
}

TEST_CASE("explicit polyset builder, stage 4 drops X^4 and keeps the pair") {
    auto s4 = build_explicit_polyset(4);
    REQUIRE(s4.polys.size() == 2);
    CHECK(s4.polys[1] == P("X^2"));
}
