#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ctxkit/errors.hpp>
#include <ctxkit/rational.hpp>

using ctxkit::format_rational;
using ctxkit::parse_rational;
using ctxkit::Rational;

TEST_CASE("fractions parse exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("29/30") == Rational(29, 30));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("+3/4") == Rational(3, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("0") == Rational(0));
  CHECK(parse_rational("0/5") == Rational(0));
}

TEST_CASE("parsing canonicalizes to lowest terms") {
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(format_rational(parse_rational("6/8")) == "3/4");
  CHECK(parse_rational("120/360") == Rational(1, 3));
}

TEST_CASE("malformed fraction text is rejected") {
  for (const char* bad : {"", "1.5", "a", "1/0", "0/0", "1/", "/2", "1e3", " 1/2", "1 /2",
                          "1/2/3", "--1", "1/-2", "0x10"}) {
    CHECK_THROWS_AS(parse_rational(bad), ctxkit::ParseError);
  }
}

TEST_CASE("formatting writes integers without a denominator") {
  CHECK(format_rational(Rational(7)) == "7");
  CHECK(format_rational(Rational(-2)) == "-2");
  CHECK(format_rational(Rational(0)) == "0");
  CHECK(format_rational(Rational(1, 2)) == "1/2");
  CHECK(format_rational(Rational(-1, 2)) == "-1/2");
}

TEST_CASE("parse and format are mutually inverse") {
  for (const char* text : {"0", "1", "-1", "1/2", "-7/3", "1000000007/999999937"}) {
    CHECK(format_rational(parse_rational(text)) == text);
  }
}

TEST_CASE("rationals convert to doubles") {
  CHECK(ctxkit::to_double(Rational(1, 2)) == doctest::Approx(0.5));
  CHECK(ctxkit::to_double(Rational(-1, 3)) == doctest::Approx(-1.0 / 3.0));
  CHECK(ctxkit::to_double(Rational(0)) == 0.0);
}

TEST_CASE("arithmetic stays exact at large denominators") {
  Rational sum(0);
  for (int k = 1; k <= 50; ++k) sum += Rational(1, k);
  // Harmonic number H_50, computed independently: the denominator is the
  // LCM-ish blowup no double could track exactly.
  CHECK(sum > Rational(4));
  CHECK(sum < Rational(5));
  CHECK(sum * 2 - sum == sum);
}
