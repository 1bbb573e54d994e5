#include "cantor/rational.hpp"

#include <cctype>
#include <cmath>

namespace cantor {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

Integer floor_of(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Integer ceil_of(const Rational& x) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rational frac_of(const Rational& x) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return make_rational(r, x.get_den());
}

std::string to_text(const Rational& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }
std::string to_text(const Integer& x) { return x.get_str(); }

static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Integer parse_integer(const std::string& raw) {
    std::string s = trim(raw);
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw DomainError("not an integer: '" + raw + "'");
    for (size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw DomainError("not an integer: '" + raw + "'");
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

Rational parse_rational(const std::string& raw) {
    std::string s = trim(raw);
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(s));
    Integer n = parse_integer(s.substr(0, slash));
    Integer d = parse_integer(s.substr(slash + 1));
    if (d < 0) { n = -n; d = -d; }
    return make_rational(n, d);
}

bool is_power_of_two(const Integer& x) {
    if (x <= 0) return false;
    return mpz_scan1(x.get_mpz_t(), 0) == mpz_sizeinbase(x.get_mpz_t(), 2) - 1;
}

namespace {

// |x| as mantissa in [0.5,1) and binary exponent; x != 0.
struct Approx {
    double m;
    long e;
};

Approx approx_abs(const Rational& x) {
    long en = 0, ed = 0;
    double mn = std::fabs(mpz_get_d_2exp(&en, x.get_num_mpz_t()));
    double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
    return {mn / md, en - ed};
}

int sign_of(int c) { return c > 0 ? 1 : (c < 0 ? -1 : 0); }

int cmp_positive(const Rational& a, const Rational& b) {
    const Integer& da = a.get_den();
    const Integer& db = b.get_den();
    if (da == db) return sign_of(mpz_cmpabs(a.get_num_mpz_t(), b.get_num_mpz_t()));
    if (is_power_of_two(da) && is_power_of_two(db)) {
        size_t ea = mpz_sizeinbase(da.get_mpz_t(), 2) - 1;
        size_t eb = mpz_sizeinbase(db.get_mpz_t(), 2) - 1;
        Integer t;
        if (ea < eb) {
            mpz_mul_2exp(t.get_mpz_t(), a.get_num_mpz_t(), eb - ea);
            mpz_abs(t.get_mpz_t(), t.get_mpz_t());
            return sign_of(mpz_cmpabs(t.get_mpz_t(), b.get_num_mpz_t()));
        }
        mpz_mul_2exp(t.get_mpz_t(), b.get_num_mpz_t(), ea - eb);
        return sign_of(mpz_cmpabs(a.get_num_mpz_t(), t.get_mpz_t()));
    }
    Approx x = approx_abs(a), y = approx_abs(b);
    // mantissa ratio lies in (1/4, 4); exponent gap of 3 or more decides.
    long gap = x.e - y.e;
    if (gap >= 3) return 1;
    if (gap <= -3) return -1;
    double r = std::ldexp(x.m / y.m, static_cast<int>(gap));
    if (r > 1.0 + 1e-9) return 1;
    if (r < 1.0 - 1e-9) return -1;
    Rational aa = abs(a), bb = abs(b);
    return sign_of(mpq_cmp(aa.get_mpq_t(), bb.get_mpq_t()));
}

} // namespace

int fast_cmp(const Rational& a, const Rational& b) {
    int sa = sgn(a), sb = sgn(b);
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    int c = cmp_positive(a, b);
    return sa > 0 ? c : -c;
}

Rational round_down(const Rational& x, unsigned bits) {
    Integer t;
    mpz_mul_2exp(t.get_mpz_t(), x.get_num_mpz_t(), bits);
    mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), x.get_den_mpz_t());
    Rational r(t);
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
    return r;
}

Rational round_up(const Rational& x, unsigned bits) {
    Integer t;
    mpz_mul_2exp(t.get_mpz_t(), x.get_num_mpz_t(), bits);
    mpz_cdiv_q(t.get_mpz_t(), t.get_mpz_t(), x.get_den_mpz_t());
    Rational r(t);
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
    return r;
}

Enclosure::Enclosure(const Rational& l, const Rational& h) : lo(l), hi(h) {
    if (h < l) throw DomainError("enclosure with hi < lo");
}

Integer factorial(unsigned n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer lcm_upto(unsigned n) {
    Integer r = 1;
    for (unsigned k = 2; k <= n; ++k) mpz_lcm_ui(r.get_mpz_t(), r.get_mpz_t(), k);
    return r;
}

std::vector<unsigned> divisors(unsigned n) {
    std::vector<unsigned> out;
    for (unsigned d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

} // namespace cantor
