#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mdnet {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q" with q >= 1, always including the denominator ("0/1", "-3/2").
std::string to_fraction_string(const Rational& r);

/// Accepts "p", "p/q" and optional sign. Throws ParseError on bad input.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double.
inline Rational rational_from_double(double x) { return Rational(x); }

} // namespace mdnet
