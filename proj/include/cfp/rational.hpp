#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace cfp {

/// Exact rational scalar. Every finite double converts to it without loss.
using Rational = boost::multiprecision::mpq_rational;

double to_double(const Rational& r);
Rational from_double(double v);

/// Parses "12", "-3", "0.125", "1e-9", "2.5e3" or "p/q" exactly.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Always exact: "2/3", "-5", "0".
std::string exact_string(const Rational& r);

/// "2/3" when the denominator is small, otherwise a round-trippable decimal.
std::string display_string(const Rational& r);

Rational abs(const Rational& r);

/// Iterates of long orbits can grow without bound in bit size; beyond
/// max_bits the value is replaced by its nearest double.
Rational compact(const Rational& r, unsigned max_bits = 256);

/// Power with an integer exponent (negative allowed for nonzero base).
Rational ipow(const Rational& base, int exponent);

}  // namespace cfp
