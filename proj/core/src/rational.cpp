#include "ctxkit/rational.hpp"

#include "ctxkit/errors.hpp"

#include <cctype>

namespace ctxkit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  std::string_view num_part = body;
  std::string_view den_part;
  bool has_den = false;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num_part = body.substr(0, slash);
    den_part = body.substr(slash + 1);
    has_den = true;
  }

  if (!all_digits(num_part) || (has_den && !all_digits(den_part))) {
    throw ParseError("not a fraction: \"" + std::string(text) +
                     "\" (expected \"p/q\" or an integer; decimals are not accepted)");
  }

  Integer num{std::string(num_part)};
  Integer den = has_den ? Integer{std::string(den_part)} : Integer{1};
  if (den == 0) {
    throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) {
  return value.template convert_to<double>();
}

}  // namespace ctxkit
