#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace lintest {

// All domain arithmetic runs on arbitrary-precision integers so that n-bit
// domains with n >= 64 and coefficients like 2^63 + 1 work without overflow
// anywhere.  Rational is used wherever an exact probability or fraction is
// reported; nothing in the analysis path rounds through floating point.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^n.
Int pow2(unsigned n);

// b * 2^n computed as a left shift (sign-preserving).  This is the only
// multiply-by-domain-size route the testers use; tests cross-check it against
// ordinary multiplication.
Int shift_mul_pow2(const Int& b, unsigned n);

// ceil(num / den) for den > 0, exact.
Int ceil_div(const Int& num, const Int& den);

// Smallest integer >= r.
Int ceil_rational(const Rational& r);

// Parse a decimal integer with optional sign.  Throws std::invalid_argument
// on anything else (no whitespace, no hex).
Int parse_int(const std::string& text);

// Parse "p/q", a plain integer, or a finite decimal like "0.25" into an exact
// rational.  Throws std::invalid_argument on malformed input or q == 0.
Rational parse_rational(const std::string& text);

// Canonical "p/q" rendering (lowest terms, "p" alone when q == 1).
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

}  // namespace lintest
