#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cantor/errors.hpp"

namespace cantor {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical rational from numerator/denominator. Zero denominator is a DomainError.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
Rational frac_of(const Rational& x);   // x - floor(x), always in [0,1)

// "num/den" text form. Integers are written with "/1" so the format is uniform.
std::string to_text(const Rational& x);
std::string to_text(const Integer& x);
// Accepts "a", "a/b", optional sign, surrounding blanks.
Rational parse_rational(const std::string& s);
Integer parse_integer(const std::string& s);

// Three-way comparison tuned for huge dyadic denominators: shifts instead of
// cross multiplication when both denominators are powers of two, and a double
// precheck otherwise. Result agrees with mpq_cmp exactly.
int fast_cmp(const Rational& a, const Rational& b);
inline bool fast_less(const Rational& a, const Rational& b) { return fast_cmp(a, b) < 0; }

struct FastLess {
    bool operator()(const Rational& a, const Rational& b) const { return fast_cmp(a, b) < 0; }
};

// Outward rounding to the grid 2^-bits.
Rational round_down(const Rational& x, unsigned bits);
Rational round_up(const Rational& x, unsigned bits);

bool is_power_of_two(const Integer& x);

// Closed rational interval [lo, hi]; lo == hi for exact values.
struct Enclosure {
    Rational lo;
    Rational hi;

    Enclosure() = default;
    explicit Enclosure(const Rational& v) : lo(v), hi(v) {}
    Enclosure(const Rational& l, const Rational& h);

    bool exact() const { return lo == hi; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
};

Integer factorial(unsigned n);
Integer lcm_upto(unsigned n);
std::vector<unsigned> divisors(unsigned n);

} // namespace cantor
