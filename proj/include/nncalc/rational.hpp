#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nncalc {

using Integer = mpz_class;
using Rational = mpq_class;
using RVec = std::vector<Rational>;

// Parses "p/q" or "p" (optional sign, no decimals). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; the denominator is always written, e.g. "3/1".
std::string to_string(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

// max(0, x)^r
Rational rho(const Rational& x, unsigned r);

inline int sign(const Rational& q) { return sgn(q); }

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

Integer binomial(unsigned n, unsigned k);
Integer factorial(unsigned n);

// Exact conversion of a finite double.
Rational from_double(double x);
double to_double(const Rational& q);

// Smallest-denominator-ish dyadic rational strictly between a < b.
Rational between(const Rational& a, const Rational& b);

}  // namespace nncalc
