#include "imdyn/rational.hpp"

#include <doctest.h>

using namespace imdyn;

TEST_CASE("rational parsing") {
  CHECK(*parse_rational("3/4") == Rational(3) / 4);
  CHECK(*parse_rational("-3/4") == Rational(-3) / 4);
  CHECK(*parse_rational("7") == 7);
  CHECK(*parse_rational("0.65") == Rational(13) / 20);
  CHECK(*parse_rational("-1.25") == Rational(-5) / 4);
  CHECK(!parse_rational("abc").has_value());
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("").has_value());
}

TEST_CASE("rational serialization round-trips") {
  for (const char* s : {"3/4", "-5/7", "0", "12"}) {
    Rational r = *parse_rational(s);
    CHECK(*parse_rational(to_string(r)) == r);
  }
  CHECK(to_string(Rational(13) / 20) == "13/20");
  CHECK(to_string(Rational(4)) == "4");
}

TEST_CASE("integer powers") {
  CHECK(pow_rational(Rational(3) / 2, 2) == Rational(9) / 4);
  CHECK(pow_rational(Rational(3) / 2, -2) == Rational(4) / 9);
  CHECK(pow_rational(Rational(5), 0) == 1);
  CHECK(pow_rational(Rational(-2), 3) == -8);
}

TEST_CASE("abs") {
  CHECK(abs(Rational(-3) / 7) == Rational(3) / 7);
  CHECK(abs(Rational(3) / 7) == Rational(3) / 7);
}
