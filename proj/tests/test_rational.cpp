#include <doctest.h>

#include "taucert/rational.hpp"

using namespace taucert;

TEST_CASE("rational parse and render round-trip") {
  CHECK(to_string(*parse_rational("2/4")) == "1/2");
  CHECK(to_string(*parse_rational("7")) == "7");
  CHECK(to_string(*parse_rational("-6/9")) == "-2/3");
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("").has_value());
  CHECK(!parse_rational("1.5").has_value());
  CHECK(!parse_rational("2/").has_value());
}

TEST_CASE("dyadic rounding brackets the value") {
  Rational q(1, 3);
  for (unsigned bits : {4u, 16u, 64u}) {
    Rational lo = dyadic_floor(q, bits);
    Rational hi = dyadic_ceil(q, bits);
    CHECK(lo <= q);
    CHECK(hi >= q);
    CHECK(hi - lo <= pow2(-long(bits)));
    CHECK(denominator(lo) <= BigInt(1) << bits);
  }
  // negatives round toward -inf / +inf respectively
  Rational n(-1, 3);
  CHECK(dyadic_floor(n, 8) <= n);
  CHECK(dyadic_ceil(n, 8) >= n);
}

TEST_CASE("integer sqrt and k-th root floors") {
  CHECK(isqrt(BigInt(0)) == 0);
  CHECK(isqrt(BigInt(35)) == 5);
  CHECK(isqrt(BigInt(36)) == 6);
  CHECK(iroot(BigInt(26), 3) == 2);
  CHECK(iroot(BigInt(27), 3) == 3);
  CHECK(iroot(BigInt(28), 3) == 3);
  BigInt big = BigInt(1) << 200;
  CHECK(iroot(big, 4) == BigInt(1) << 50);
  CHECK(iroot(big - 1, 4) == (BigInt(1) << 50) - 1);
}

TEST_CASE("point helpers") {
  RationalPoint a{Rational(0), Rational(0)};
  RationalPoint b{Rational(3), Rational(4)};
  CHECK(dist_sq(a, b) == 25);
  CHECK(chebyshev(a, b) == 4);
}
