#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace yamabe {

/// Exact arbitrary-precision rational, always kept in canonical form.
using Rational = mpq_class;

/// num/den in canonical form. The two-argument mpq_class constructor does not
/// reduce, and comparisons of unreduced values are wrong.
Rational make_rational(long num, long den);

/// Formats as "numerator/denominator" (denominator always present).
std::string to_string(const Rational& q);

/// Parses "a/b", an integer, or a finite decimal such as "-0.125" or "1e-3".
/// Decimals are converted exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);
long double to_long_double(const Rational& q);

/// Natural log of |q|, valid even when numerator/denominator overflow a double.
/// Returns -inf for q == 0.
double log_abs(const Rational& q);

/// Exact rational value of a finite double.
Rational from_double(double x);

}  // namespace yamabe
