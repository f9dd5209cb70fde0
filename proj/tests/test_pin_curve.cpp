#include <doctest.h>

#include <cmath>
#include <random>

#include "taucert/errors.hpp"
#include "taucert/pin_curve.hpp"

using namespace taucert;

TEST_CASE("distance pin curve hits the known points") {
  // x = (2,1), t = sqrt(5): g(3) = 1 + sqrt(5 - 1) = 3
  PinCurve c = PinCurve::distance({Rational(2), Rational(1)}, Rational(5));
  Enclosure v = eval_pin_curve(c, Rational(3), 128);
  CHECK(v.contains(Rational(3)));
  CHECK(v.width() <= pow2(-100));

  // unit circle top: x = (0,0), t = 1, g(0) = 1
  PinCurve unit = PinCurve::distance({Rational(0), Rational(0)}, Rational(1));
  CHECK(eval_pin_curve(unit, Rational(0), 64).contains(Rational(1)));

  // outside the domain
  CHECK_THROWS_AS(eval_pin_curve(unit, Rational(2), 64), Error);
}

TEST_CASE("dot pin curve is exact") {
  PinCurve c = PinCurve::dot_product({Rational(1), Rational(1)}, Rational(3, 2));
  Enclosure v = eval_pin_curve(c, Rational(1, 2), 64);
  CHECK(v.is_point());
  CHECK(v.lo == Rational(1));
}

TEST_CASE("property: enclosures contain a long-double reference") {
  std::mt19937_64 rng(0x9A0);
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 20);
  int done = 0;
  for (int trial = 0; trial < 4000 && done < 1000; ++trial) {
    Rational x1(num(rng), den(rng)), x2(num(rng), den(rng));
    int tn = num(rng);
    Rational t_sq(tn * tn + 1, den(rng));
    Rational z(num(rng), den(rng));
    Rational rad = t_sq - (z - x1) * (z - x1);
    if (rad <= 0) continue;
    ++done;
    PinCurve c = PinCurve::distance({x1, x2}, t_sq);
    Enclosure v = eval_pin_curve(c, z, 96);
    long double ref = static_cast<long double>(to_double(x2)) +
                      sqrtl(static_cast<long double>(to_double(rad)));
    CHECK(to_double(v.lo) <= static_cast<double>(ref) + 1e-12);
    CHECK(to_double(v.hi) >= static_cast<double>(ref) - 1e-12);
  }
  CHECK(done == 1000);
}

TEST_CASE("monotonicity in t: enclosures at a t-grid are disjoint and increasing") {
  RationalPoint pin{Rational(0), Rational(0)};
  Rational z(1, 3);
  Enclosure prev;
  bool first = true;
  for (int k = 0; k < 20; ++k) {
    Rational t_sq = Rational(1) + Rational(k, 8);
    Enclosure v = eval_pin_curve(PinCurve::distance(pin, t_sq), z, 128);
    if (!first) CHECK(strictly_below(prev, v));
    prev = v;
    first = false;
  }
}

TEST_CASE("implicit solver agrees with the closed forms") {
  Rational tol(1, BigInt(1) << 40);
  // euclidean: x = (2,1), t = sqrt(5), z = 3, bracket above x2
  Enclosure t = sqrt_enclose(exactly(Rational(5)), 128);
  Enclosure y = solve_implicit_pin_curve(PhiSpec::dist(), {Rational(2), Rational(1)}, t,
                                         Rational(3), {Rational(2), Rational(4)}, tol);
  CHECK(y.lo <= 3);
  CHECK(y.hi >= 3 - tol);
  Enclosure closed = eval_pin_curve(PinCurve::distance({Rational(2), Rational(1)}, Rational(5)),
                                    Rational(3), 128);
  CHECK(y.lo <= closed.hi + tol);
  CHECK(y.hi >= closed.lo - tol);

  // 3-norm: x = (0,0), t = 1, z = 0 -> y2 = 1 exactly (found by the exact
  // sign predicate)
  Enclosure n = solve_implicit_pin_curve(PhiSpec::pnorm(3), {Rational(0), Rational(0)},
                                         exactly(Rational(1)), Rational(0),
                                         {Rational(1, 2), Rational(3, 2)}, tol);
  CHECK(n.contains(Rational(1)));
  CHECK(n.width() <= tol);

  // dot: exact root
  Enclosure d = solve_implicit_pin_curve(PhiSpec::dot(), {Rational(1), Rational(1)},
                                         exactly(Rational(3, 2)), Rational(1, 2),
                                         {Rational(0), Rational(2)}, tol);
  CHECK(d.contains(Rational(1)));
}

TEST_CASE("implicit solver error paths") {
  Rational tol(1, 1 << 20);
  // no sign change over the bracket
  CHECK_THROWS_AS(solve_implicit_pin_curve(PhiSpec::dist(), {Rational(0), Rational(0)},
                                           exactly(Rational(10)), Rational(0),
                                           {Rational(1), Rational(2)}, tol),
                  Error);
  // derivative condition fails: bracket crosses the pin's y-coordinate
  CHECK_THROWS_AS(solve_implicit_pin_curve(PhiSpec::dist(), {Rational(0), Rational(0)},
                                           exactly(Rational(1)), Rational(0),
                                           {Rational(-1, 2), Rational(2)}, tol),
                  Error);
}

TEST_CASE("affine map basics") {
  AffineMap m(Rational(2), Rational(-7, 6));
  CHECK(m.exact());
  CHECK(m.increasing());
  CHECK(m.value(Rational(1), 64).is_point());
  CHECK(m.value(Rational(1), 64).lo == Rational(5, 6));
  CHECK(m.derivative_box(exactly(Rational(0)), 64).lo == 2);
  CHECK_THROWS_AS(AffineMap(Rational(0), Rational(1)), Error);
}

TEST_CASE("distance curve map derivative and slope certification") {
  // pin (0,0), t^2 = 2, window z in [8/9, 1]: |g'| = z / sqrt(2 - z^2)
  DistanceCurveMap m({Rational(0), Rational(0)}, Rational(2));
  CHECK(!m.increasing());
  ClosedInterval window{Rational(8, 9), Rational(1)};
  auto res = certify_abs_derivative_range(m, window, Rational(1, 2), Rational(3), 256, 96);
  CHECK(res.certified);
  // |g'(1)| = 1, |g'(8/9)| = (8/9)/sqrt(2-64/81) ~ 0.82
  CHECK(to_double(res.abs_derivative.lo) > 0.7);
  CHECK(to_double(res.abs_derivative.hi) < 1.1);

  // an impossible band is reported uncertified
  auto bad = certify_abs_derivative_range(m, window, Rational(2), Rational(3), 64, 96);
  CHECK(!bad.certified);
}
