#include <doctest.h>

#include <cmath>
#include <random>

#include "taucert/enclosure.hpp"
#include "taucert/errors.hpp"

using namespace taucert;

TEST_CASE("arithmetic encloses the exact value") {
  unsigned bits = 64;
  Enclosure a = exactly(Rational(1, 3));
  Enclosure b = exactly(Rational(1, 7));
  Enclosure s = add(a, b, bits);
  CHECK(s.contains(Rational(10, 21)));
  CHECK(s.width() <= pow2(-62));
  Enclosure p = mul(a, b, bits);
  CHECK(p.contains(Rational(1, 21)));
  Enclosure q = div(a, b, bits);
  CHECK(q.contains(Rational(7, 3)));
  CHECK_THROWS_AS(div(a, enclose(Rational(-1), Rational(1)), bits), Error);
}

TEST_CASE("sqrt enclosure is sound and tight") {
  unsigned bits = 128;
  Enclosure two = exactly(Rational(2));
  Enclosure r = sqrt_enclose(two, bits);
  CHECK(r.lo * r.lo <= 2);
  CHECK(r.hi * r.hi >= 2);
  CHECK(r.width() <= pow2(-120));

  Enclosure exact = sqrt_enclose(exactly(Rational(9, 4)), bits);
  CHECK(exact.contains(Rational(3, 2)));
  CHECK_THROWS_AS(sqrt_enclose(enclose(Rational(-1), Rational(1)), bits), Error);
}

TEST_CASE("k-th root and rational powers") {
  unsigned bits = 96;
  Enclosure r = root_enclose(exactly(Rational(27)), 3, bits);
  CHECK(r.contains(Rational(3)));
  CHECK(r.width() <= pow2(-90));

  // 8^(2/3) = 4
  Enclosure p = pow_rational(exactly(Rational(8)), Rational(2, 3), bits);
  CHECK(p.contains(Rational(4)));
  CHECK(p.width() <= pow2(-80));

  // even powers through zero stay one-sided
  Enclosure sq = pow_int(enclose(Rational(-2), Rational(3)), 2, bits);
  CHECK(sq.lo == 0);
  CHECK(sq.hi >= 9);
}

TEST_CASE("property: random expression evaluations contain a high-precision reference") {
  std::mt19937_64 rng(0xD1CE);
  std::uniform_int_distribution<int> num(-50, 50);
  std::uniform_int_distribution<int> den(1, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    Rational a(num(rng), den(rng));
    Rational b(num(rng), den(rng));
    int cn = num(rng);
    Rational c(cn * cn + 1, den(rng));  // positive
    unsigned bits = 80;
    // expr = a*b + sqrt(c)
    Enclosure e = add(mul(exactly(a), exactly(b), bits), sqrt_enclose(exactly(c), bits), bits);
    long double ref = static_cast<long double>(to_double(a)) * to_double(b) +
                      sqrtl(static_cast<long double>(to_double(c)));
    CHECK(to_double(e.lo) <= static_cast<double>(ref) + 1e-12);
    CHECK(to_double(e.hi) >= static_cast<double>(ref) - 1e-12);
    // doubling the precision never widens the enclosure
    Enclosure e2 =
        add(mul(exactly(a), exactly(b), 2 * bits), sqrt_enclose(exactly(c), 2 * bits), 2 * bits);
    CHECK(e2.lo >= e.lo);
    CHECK(e2.hi <= e.hi);
  }
}

TEST_CASE("precision escalation scaffolding") {
  Precision p = default_precision();
  CHECK(p.bits >= 16);
  Precision q = p.next();
  CHECK(q.bits == 2 * p.bits);
  Precision capped{2048, 1024};
  CHECK(capped.exhausted());
}
