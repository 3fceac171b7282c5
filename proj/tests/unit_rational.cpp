#include "doctest.h"

#include <stdexcept>

#include "l2approx/rational.hpp"

using namespace l2approx;

TEST_CASE("pow_rational exact powers") {
  CHECK(pow_rational(Rational(3, 4), 0) == Rational(1));
  CHECK(pow_rational(Rational(3, 4), 1) == Rational(3, 4));
  CHECK(pow_rational(Rational(3, 4), 5) == Rational(243, 1024));
  CHECK(pow_rational(Rational(-2), 3) == Rational(-8));
}

TEST_CASE("binomial against Pascal recurrence") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(128, 64) == binomial(127, 63) + binomial(127, 64));
  for (unsigned long n = 1; n <= 24; ++n)
    for (unsigned long k = 1; k < n; ++k)
      CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST_CASE("floor_log2") {
  CHECK(floor_log2(Integer(1)) == 0);
  CHECK(floor_log2(Integer(2)) == 1);
  CHECK(floor_log2(Integer(3)) == 1);
  CHECK(floor_log2(Integer(4)) == 2);
  CHECK(floor_log2(Integer(1023)) == 9);
  CHECK(floor_log2(Integer(1024)) == 10);
}

TEST_CASE("rational string round trip") {
  for (const char* s : {"0", "1", "-1", "2/3", "-7/12", "123456789123456789/2"}) {
    Rational x = rational_from_string(s);
    CHECK(rational_to_string(x) == s);
  }
  CHECK(rational_from_string("4/6") == Rational(2, 3));
  CHECK(rational_to_string(rational_from_string("4/6")) == "2/3");
  CHECK_THROWS_AS(rational_from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("a"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("1.5"), std::invalid_argument);
}

TEST_CASE("ln enclosure brackets known logs") {
  // 10^18-scale bounds: 0.693147180559945309 < ln 2 < 0.693147180559945310.
  Rational ln2_lo = rational_from_string("693147180559945309") / rational_from_string("1000000000000000000");
  Rational ln2_hi = rational_from_string("693147180559945310") / rational_from_string("1000000000000000000");
  RatInterval e = ln_enclosure(Rational(2));
  CHECK(e.lo <= e.hi);
  CHECK(e.lo <= ln2_hi);
  CHECK(e.hi >= ln2_lo);
  CHECK(e.width() <= Rational(3) / pow_rational(Rational(2), 40));

  RatInterval one = ln_enclosure(Rational(1));
  CHECK(one.lo == Rational(0));
  CHECK(one.hi == Rational(0));

  // ln(1/2) = -ln 2.
  RatInterval half = ln_enclosure(Rational(1, 2));
  CHECK(half.lo <= -ln2_lo);
  CHECK(half.hi >= -ln2_hi - Rational(1, 1000000));
  CHECK(half.hi < Rational(0));

  CHECK_THROWS_AS(ln_enclosure(Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(ln_enclosure(Rational(-3)), std::invalid_argument);
}

TEST_CASE("ln enclosure tightens with bits and stays nested around the point") {
  Rational ln3_lo = rational_from_string("1098612288668109691") / rational_from_string("1000000000000000000");
  Rational ln3_hi = rational_from_string("1098612288668109692") / rational_from_string("1000000000000000000");
  for (unsigned bits : {10u, 20u, 40u, 80u}) {
    RatInterval e = ln_enclosure(Rational(3), bits);
    CHECK(e.lo <= ln3_hi);
    CHECK(e.hi >= ln3_lo);
    CHECK(e.width() <= Rational(3) / pow_rational(Rational(2), bits));
  }
}

TEST_CASE("ceil_ln") {
  CHECK(ceil_ln(Rational(1)) == 0);
  CHECK(ceil_ln(Rational(2)) == 1);
  CHECK(ceil_ln(Rational(3)) == 2);   // ln 3 = 1.0986
  CHECK(ceil_ln(Rational(16)) == 3);  // ln 16 = 2.7726
  CHECK(ceil_ln(Rational(1, 2)) == 0);
}

TEST_CASE("interval helpers") {
  RatInterval i{Rational(1, 3), Rational(1, 2)};
  CHECK(i.width() == Rational(1, 6));
  CHECK(i.contains(Rational(2, 5)));
  CHECK(!i.contains(Rational(3, 5)));
  CHECK(i.contains(Rational(1, 3)));
}
