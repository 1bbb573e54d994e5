#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cantor/family.hpp"

using namespace cantor;

namespace {

Rational R(long a, long b) { return make_rational(a, b); }

std::vector<Rational> samples(long den) {
    std::vector<Rational> v;
    for (long i = 0; i <= den; ++i) v.push_back(R(i, den));
    return v;
}

void check_adf_invariants(const Adf& f) {
    CHECK(f(0) == 0);
    CHECK(f(1) == 1);
    Rational prev = 0;
    for (const auto& k : f.knots()) {
        CHECK(k.left <= k.point);
        CHECK(k.point <= k.right);
        CHECK(prev <= k.left);
        prev = k.right;
    }
    for (const auto& x : samples(97)) CHECK(f.eval(x, Adf::Side::Left) <= f.eval(x, Adf::Side::Right));
}

// Random closed set with pieces on the 1/den grid, some degenerate.
ClosedSetU random_set(std::mt19937& rng, long den) {
    std::uniform_int_distribution<long> pos(0, den), kind(0, 2);
    std::vector<ClosedSetU::Piece> ps;
    int count = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < count; ++i) {
        long a = pos(rng);
        long b = kind(rng) == 0 ? a : std::min(den, a + 1 + static_cast<long>(rng() % 5));
        ps.push_back({R(a, den), R(b, den)});
    }
    return ClosedSetU(ps);
}

} // namespace

TEST_CASE("eval examples") {
    CHECK(Adf::identity()(R(1, 3)) == R(1, 3));
    CHECK(Adf::step(R(1, 2))(R(1, 4)) == 0);
    CHECK(Adf::step(R(1, 2))(R(1, 2)) == 1);
    CHECK(Adf::step(R(1, 2)).eval(R(1, 2), Adf::Side::Left) == 0);
    CHECK(Adf::power(2)(R(1, 2)) == R(1, 4));
    CHECK_THROWS_AS(Adf::identity()(R(3, 2)), DomainError);
    CHECK_THROWS_AS(Adf::identity()(R(-1, 2)), DomainError);
}

TEST_CASE("adf validation rejects bad knots") {
    CHECK_THROWS_AS(Adf({{0, 0, 0, 0}, {1, R(1, 2), R(1, 2), R(1, 2)}}), DomainError);
    CHECK_THROWS_AS(Adf({{0, 0, 0, 0}, {R(1, 2), R(1, 2), R(1, 4), R(1, 2)}, {1, 1, 1, 1}}), DomainError);
    CHECK_THROWS_AS(Adf({{0, 0, 0, 0}, {R(1, 2), R(3, 4), R(3, 4), R(3, 4)}, {R(1, 3), 1, 1, 1}}), DomainError);
}

TEST_CASE("inf_preimage examples and oracle") {
    CHECK(inf_preimage(Adf::identity(), R(1, 3)) == R(1, 3));
    CHECK(inf_preimage(Adf::power(2), R(1, 4)) == R(1, 2));
    CHECK(inf_preimage(Adf::step(R(1, 2)), R(1, 2)) == R(1, 2));
    CHECK(inf_preimage(Adf::identity(), 0) == 0);
    // Oracle: f(x*) side values reach q and every grid point left of x* stays below q.
    Adf f = adf_from_closed_set(ClosedSetU({{R(1, 8), R(3, 8)}, {R(1, 2), R(1, 2)}, {R(3, 4), 1}}));
    for (const auto& q : samples(40)) {
        Rational x = f.inf_preimage(q);
        CHECK(std::max(f.eval(x), f.eval(x, Adf::Side::Right)) >= q);
        for (const auto& y : samples(160))
            if (y < x) CHECK(f(y) < q);
        Rational s = f.sup_preimage(q);
        CHECK(std::min(f.eval(s), f.eval(s, Adf::Side::Left)) <= q);
        for (const auto& y : samples(160))
            if (y > s) CHECK(f(y) > q);
    }
    // irrational root: floor on the dyadic grid, within 2^-128
    Rational x = Adf::power(2).inf_preimage(R(1, 2));
    CHECK(x * x <= R(1, 2));
    Rational up = x + Rational(1) / Rational(Integer(1) << 128);
    CHECK(up * up > R(1, 2));
}

TEST_CASE("increase_set examples") {
    CHECK(increase_set(Adf::identity()) == ClosedSetU::unit());
    CHECK(increase_set(Adf::step(R(1, 2))) == ClosedSetU::point(R(1, 2)));
    Adf g = Adf::interpolate({{0, 0}, {R(1, 2), 0}, {1, 1}});
    CHECK(increase_set(g) == ClosedSetU::interval(R(1, 2), 1));
}

TEST_CASE("adf_from_closed_set examples") {
    Adf a = adf_from_closed_set(ClosedSetU::unit());
    for (const auto& x : samples(13)) CHECK(a(x) == x);
    Adf b = adf_from_closed_set(ClosedSetU::point(R(1, 2)));
    CHECK(b(R(1, 2) - R(1, 1000)) == 0);
    CHECK(b.eval(R(1, 2), Adf::Side::Left) == 0);
    CHECK(b(R(1, 2)) == 1);
    Adf c = adf_from_closed_set(ClosedSetU({{0, R(1, 4)}, {R(3, 4), 1}}));
    CHECK(c(R(1, 8)) == R(1, 4));
    CHECK(c(R(1, 4)) == R(1, 2));
    CHECK(c(R(1, 2)) == R(1, 2));
    CHECK(c(R(7, 8)) == R(3, 4));
    CHECK(c.segments()[0].coef == 2);
    CHECK_THROWS_AS(adf_from_closed_set(ClosedSetU()), DomainError);
}

TEST_CASE("closed set round trip through adf, random sets") {
    std::mt19937 rng(12345);
    for (int it = 0; it < 400; ++it) {
        ClosedSetU D = random_set(rng, 24);
        Adf f = adf_from_closed_set(D);
        check_adf_invariants(f);
        CHECK(increase_set(f) == D);
    }
    // atoms at the ends
    ClosedSetU E({{0, 0}, {1, 1}});
    Adf f = adf_from_closed_set(E);
    check_adf_invariants(f);
    CHECK(increase_set(f) == E);
}

TEST_CASE("closed set parse and set algebra") {
    auto D = ClosedSetU::parse("[0,1/4],[3/4,1]");
    CHECK(D.measure() == R(1, 2));
    CHECK(ClosedSetU::parse("{1/4,3/4}").atom_count() == 2);
    CHECK(ClosedSetU::parse("[0,1/2],[1/2,1]") == ClosedSetU::unit());
    CHECK(D.intersect(ClosedSetU::interval(R(1, 8), R(7, 8))) == ClosedSetU({{R(1, 8), R(1, 4)}, {R(3, 4), R(7, 8)}}));
    CHECK(ClosedSetU::from_json(D.to_json()) == D);
    CHECK_THROWS_AS(ClosedSetU::parse("[0,2]"), DomainError);
}

TEST_CASE("adf JSON round trip") {
    Adf f = adf_from_closed_set(ClosedSetU::parse("[0,1/4],{1/2},[3/4,1]"));
    Adf g = Adf::from_json(f.to_json());
    for (const auto& x : samples(64)) {
        CHECK(f.eval(x, Adf::Side::Left) == g.eval(x, Adf::Side::Left));
        CHECK(f(x) == g(x));
        CHECK(f.eval(x, Adf::Side::Right) == g.eval(x, Adf::Side::Right));
    }
    Adf p = Adf::from_json(Adf::power(3).to_json());
    CHECK(p(R(1, 2)) == R(1, 8));
}

TEST_CASE("continuous_family_approx examples") {
    auto step = LinearFamily::constant(Adf::step(R(1, 2)));
    Adf g1 = continuous_family_approx(step, 1, 1, 0);
    CHECK(approx_grid(Adf::step(R(1, 2)), 1) == std::vector<Rational>{0, R(1, 2), 1});
    CHECK(g1(R(1, 4)) == R(1, 2));
    CHECK(g1(R(1, 2)) == 1);
    CHECK(g1(R(3, 4)) == 1);
    Adf g2 = continuous_family_approx(step, 2, 1, 0);
    CHECK(approx_grid(Adf::step(R(1, 2)), 2) == std::vector<Rational>{0, R(1, 3), R(1, 2), R(2, 3), 1});
    CHECK(g2(R(1, 3)) == 0);
    CHECK(g2(R(5, 12)) == R(1, 2));
    CHECK(g2.continuous());
    // continuous f: agrees at the grid
    Adf sq = Adf::power(2);
    for (unsigned long n : {1ul, 3ul, 10ul}) {
        Adf g = continuous_approx(sq, n);
        for (const auto& a : approx_grid(sq, n)) CHECK(g(a) == sq(a));
    }
}

TEST_CASE("continuous approximants are adfs and converge pointwise") {
    std::vector<Adf> fs = {Adf::power(2), Adf::step(R(1, 2)), adf_from_closed_set(ClosedSetU::parse("{1/4,3/4}")),
                           adf_from_closed_set(ClosedSetU::parse("[0,1/4],[3/4,1]"))};
    std::vector<Rational> xs = {R(1, 7), R(1, 3), R(3, 5), R(9, 10)};
    for (const auto& f : fs) {
        for (const auto& x : xs) {
            Rational err = 2;
            for (unsigned long n : {4ul, 16ul, 64ul}) {
                Adf g = continuous_approx(f, n);
                CHECK(g.continuous());
                check_adf_invariants(g);
                err = abs(g(x) - f(x));
            }
            CHECK(err <= R(1, 16));
        }
    }
}

TEST_CASE("gamma tuples and s-sets") {
    CHECK(gamma_tuples(3, 1) == std::vector<std::vector<unsigned long>>{{0, 0}, {0, 1}});
    CHECK(gamma_tuples(2, 0) == std::vector<std::vector<unsigned long>>{{0}});
    CHECK(s_set(1, 0) == ClosedSetU::unit());
    CHECK(s_set(2, 0) == ClosedSetU::interval(0, R(1, 2)));
    CHECK(s_set(2, 1) == ClosedSetU::interval(R(1, 2), 1));
    CHECK(s_set(3, 0) == ClosedSetU({{0, R(1, 6)}, {R(4, 6), R(5, 6)}}));
    CHECK(lcm_step(4) == 2);
    CHECK(lcm_step(6) == 1);
    CHECK(lcm_step(7) == 7);
}

TEST_CASE("s-family partition facts") {
    for (unsigned n = 1; n <= 6; ++n) {
        std::vector<ClosedSetU> parts;
        ClosedSetU all;
        for (unsigned long r = 0; r < n; ++r) {
            parts.push_back(s_set(n, r));
            all = all.unite(parts.back());
        }
        CHECK(all == ClosedSetU::unit());
        for (unsigned long r = 0; r < n; ++r) {
            CHECK(parts[r].measure() == R(1, n));
            for (unsigned long r2 = r + 1; r2 < n; ++r2) CHECK(parts[r].intersect(parts[r2]).measure() == 0);
        }
    }
    for (unsigned m = 1; m <= 3; ++m)
        for (unsigned d = 1; m * d <= 6; ++d)
            for (unsigned long r = 0; r < m; ++r) {
                ClosedSetU u;
                for (unsigned long i = 0; i < d; ++i) u = u.unite(s_set(m * d, m * i + r));
                CHECK(u == s_set(m, r));
            }
}

TEST_CASE("s-family as a linear family") {
    auto fam = ap_abnormal_family(4);
    CHECK(fam.kind() == LinearFamily::Kind::SFamily);
    for (const auto& x : samples(50)) CHECK(fam(1, 0)(x) == x);
    for (unsigned long m = 2; m <= 4; ++m)
        for (unsigned long r = 0; r < m; ++r) {
            CHECK(increase_set(fam(m, r)) == s_set(static_cast<unsigned>(m), r));
            bool differs = false;
            for (const auto& x : samples(24)) differs = differs || fam(m, r)(x) != x;
            CHECK(differs);
        }
    CHECK(family_identity_check(fam, 1, 0, 2, {R(1, 4)}).ok);
    for (unsigned long m = 1; m <= 4; ++m)
        for (unsigned long d = 1; d <= 4; ++d)
            for (unsigned long r = 0; r < m; ++r) CHECK(family_identity_check(fam, m, r, d, samples(49)).max_defect == 0);
    CHECK_THROWS_AS(ap_abnormal_family(20, 1000000), ResourceError);
}

TEST_CASE("family identity check") {
    auto u = LinearFamily::uniform();
    for (unsigned long m = 1; m <= 4; ++m)
        for (unsigned long d = 1; d <= 4; ++d) CHECK(family_identity_check(u, m, 0, d, samples(20)).ok);
    auto bad = LinearFamily::custom([](unsigned long m, unsigned long) { return m == 2 ? Adf::power(2) : Adf::identity(); });
    auto rep = family_identity_check(bad, 1, 0, 2, samples(8));
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_defect == R(1, 4));
}

TEST_CASE("olsen constraint adf") {
    auto a = olsen_constraint_adf({0, R(1, 4)}, {R(1, 4), R(1, 2)}, R(1, 4), {R(1, 2), 1});
    CHECK(a.c_I == 1);
    CHECK(a.c_J == 1);
    CHECK(a.c_K == 1);
    for (const auto& x : samples(16)) CHECK(a.F(x) == x);
    auto b = olsen_constraint_adf({0, R(1, 4)}, {R(1, 4), R(1, 2)}, R(1, 8), {R(1, 2), 1});
    CHECK(b.c_I == R(1, 2));
    CHECK(b.c_K == R(3, 2));
    CHECK(b.F(R(1, 4)) - b.F(0) == R(1, 8));
    CHECK(b.F(R(1, 2)) - b.F(R(1, 4)) == R(1, 8));
    auto z = olsen_constraint_adf({0, R(1, 4)}, {R(1, 4), R(1, 2)}, 0, {R(1, 2), 1});
    CHECK(z.F(R(1, 2)) == 0);
    CHECK(z.F(R(3, 4)) == R(1, 2));
    CHECK_THROWS_AS(olsen_constraint_adf({0, R(1, 4)}, {R(1, 4), R(1, 2)}, R(3, 4), {R(1, 2), 1}), ConstraintError);
    CHECK_THROWS_AS(olsen_constraint_adf({0, R(1, 2)}, {R(1, 4), R(3, 4)}, R(1, 4), {R(3, 4), 1}), DomainError);
}

TEST_CASE("accumulation targets") {
    auto t1 = ap_accumulation_targets({{ClosedSetU::parse("{1/4,3/4}")}});
    Adf f = t1(5, 2);
    CHECK(f.eval(R(1, 4), Adf::Side::Right) - f.eval(R(1, 4), Adf::Side::Left) == R(1, 2));
    CHECK(f.eval(R(3, 4), Adf::Side::Right) - f.eval(R(3, 4), Adf::Side::Left) == R(1, 2));
    auto all = ap_accumulation_targets({{ClosedSetU::unit()}, {ClosedSetU::unit(), ClosedSetU::unit()}});
    for (unsigned long q = 1; q <= 6; ++q)
        for (unsigned long s = 0; s < q; ++s) CHECK(all(q, s)(R(2, 7)) == R(2, 7));
    auto t2 = ap_accumulation_targets({{ClosedSetU::unit()}, {ClosedSetU::point(R(1, 2)), ClosedSetU::point(R(1, 2))}});
    CHECK(t2.A(4, 0).contains(R(1, 2)));
    CHECK(t2(4, 0)(R(1, 2)) == 1);
    CHECK(t2(4, 0)(R(1, 3)) == 0);
    CHECK_THROWS_AS(ap_accumulation_targets({{ClosedSetU::unit()}, {ClosedSetU::point(0), ClosedSetU::point(1)}}),
                    ConstraintError);
}

TEST_CASE("target spec ordering") {
    TargetSpec ok{{{LinearFamily::uniform(), LinearFamily::power(2)}}};
    CHECK_NOTHROW(ok.validate());
    TargetSpec bad{{{LinearFamily::power(2), LinearFamily::uniform()}}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("family config parsing") {
    auto f = LinearFamily::from_json({{"kind", "power"}, {"exponent", 3}});
    CHECK(f(2, 1)(R(1, 2)) == R(1, 8));
    auto c = LinearFamily::from_json({{"kind", "closed-set"}, {"set", "[0,1/4],[3/4,1]"}});
    CHECK(c(1, 0)(R(1, 2)) == R(1, 2));
    CHECK_THROWS_AS(LinearFamily::from_json({{"kind", "nope"}}), ConfigError);
    CHECK_THROWS_AS(LinearFamily::from_json({{"kind", "closed-set"}, {"set", "[0,3]"}}), ConfigError);
}
