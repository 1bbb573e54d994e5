#include "cantor/real_bounds.hpp"

#include <mpfr.h>

#include <algorithm>

namespace cantor {

namespace {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(unsigned prec) { mpfr_init2(v, prec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    Rational to_q() const {
        Rational r;
        mpfr_get_q(r.get_mpq_t(), v);
        return r;
    }
};

} // namespace

Enclosure log_bounds(const Integer& x, unsigned prec) {
    if (x <= 0) throw DomainError("log of non-positive integer");
    if (x == 1) return Enclosure(Rational(0));
    size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
    Mpfr lo(prec), hi(prec), t(std::max<unsigned>(prec, bits + 2));
    mpfr_set_z(t.v, x.get_mpz_t(), MPFR_RNDN);   // exact, precision covers all bits
    mpfr_log(lo.v, t.v, MPFR_RNDD);
    mpfr_log(hi.v, t.v, MPFR_RNDU);
    return Enclosure(lo.to_q(), hi.to_q());
}

Enclosure log_bounds(const Rational& x, unsigned prec) {
    if (x <= 0) throw DomainError("log of non-positive rational");
    Enclosure n = log_bounds(Integer(x.get_num()), prec);
    Enclosure d = log_bounds(Integer(x.get_den()), prec);
    return n - d;
}

Enclosure exp_bounds(const Rational& x, unsigned prec) {
    Mpfr a(prec), b(prec), lo(prec), hi(prec);
    mpfr_set_q(a.v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(b.v, x.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(lo.v, a.v, MPFR_RNDD);
    mpfr_exp(hi.v, b.v, MPFR_RNDU);
    return Enclosure(lo.to_q(), hi.to_q());
}

Enclosure sqrt_bounds(const Enclosure& x, unsigned prec) {
    if (x.lo < 0) throw DomainError("sqrt of interval reaching below zero");
    Mpfr a(prec), b(prec), lo(prec), hi(prec);
    mpfr_set_q(a.v, x.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(b.v, x.hi.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(lo.v, a.v, MPFR_RNDD);
    mpfr_sqrt(hi.v, b.v, MPFR_RNDU);
    return Enclosure(lo.to_q(), hi.to_q());
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return Enclosure(a.lo + b.lo, a.hi + b.hi); }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return Enclosure(a.lo - b.hi, a.hi - b.lo); }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return Enclosure(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
    if (b.lo <= 0 && b.hi >= 0) throw DomainError("interval division by a range containing zero");
    Enclosure inv(1 / b.hi, 1 / b.lo);
    if (b.hi < 0) inv = Enclosure(1 / b.hi, 1 / b.lo);
    return a * Enclosure(std::min(inv.lo, inv.hi), std::max(inv.lo, inv.hi));
}

Enclosure min_of(const Enclosure& a, const Enclosure& b) {
    return Enclosure(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

Enclosure max_of(const Enclosure& a, const Enclosure& b) {
    return Enclosure(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

Enclosure widen_to_grid(const Enclosure& e, unsigned bits) {
    return Enclosure(round_down(e.lo, bits), round_up(e.hi, bits));
}

} // namespace cantor
