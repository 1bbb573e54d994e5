#pragma once
#include "cantor/rational.hpp"

namespace cantor {

// Certified enclosures of transcendental values, computed with MPFR under
// directed rounding and returned as exact rational endpoints.
constexpr unsigned kDefaultPrecision = 192;

Enclosure log_bounds(const Integer& x, unsigned prec = kDefaultPrecision);
Enclosure log_bounds(const Rational& x, unsigned prec = kDefaultPrecision);
Enclosure exp_bounds(const Rational& x, unsigned prec = kDefaultPrecision);
Enclosure sqrt_bounds(const Enclosure& x, unsigned prec = kDefaultPrecision);

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator/(const Enclosure& a, const Enclosure& b);   // b must exclude 0
Enclosure min_of(const Enclosure& a, const Enclosure& b);
Enclosure max_of(const Enclosure& a, const Enclosure& b);

// Outward rounding of both endpoints to 2^-bits, keeps storage bounded.
Enclosure widen_to_grid(const Enclosure& e, unsigned bits);

} // namespace cantor
