#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace ctxkit {

using Integer = boost::multiprecision::mpz_int;

// Always canonical: lowest terms, positive denominator.
using Rational = boost::multiprecision::mpq_rational;

// Parses "p/q" or a bare integer, with an optional leading minus on p.
// Decimal notation is rejected on purpose — the on-disk format is exact.
// Throws ParseError on anything else (including a zero denominator).
Rational parse_rational(std::string_view text);

// Inverse of parse_rational: "p/q", or plain "p" when q == 1.
std::string format_rational(const Rational& value);

// Nearest double; fine for display and confidence bounds, never for decisions.
double to_double(const Rational& value);

}  // namespace ctxkit
