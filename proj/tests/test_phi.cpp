#include <doctest.h>

#include <cmath>
#include <random>

#include "taucert/errors.hpp"
#include "taucert/phi.hpp"

using namespace taucert;

namespace {
Box2 box(int alo, int ahi, int blo, int bhi, int d = 1) {
  return Box2{{Rational(alo, d), Rational(ahi, d)}, {Rational(blo, d), Rational(bhi, d)}};
}
}  // namespace

TEST_CASE("phi grammar round trips") {
  for (const char* s : {"dist", "dot", "pnorm:3", "pnorm:3/2", "implicit:dist", "implicit:dot",
                        "implicit:pnorm:3"}) {
    CHECK(render(parse_phi_spec(s)) == s);
  }
  CHECK_THROWS_AS(parse_phi_spec("pnorm:1/2"), Error);
  CHECK_THROWS_AS(parse_phi_spec("metric"), Error);
}

TEST_CASE("box grammar") {
  Box2 b = parse_box("[0,1/4]x[3/5,1]");
  CHECK(b.x.hi == Rational(1, 4));
  CHECK(b.y.lo == Rational(3, 5));
  CHECK_THROWS_AS(parse_box("[0,1]"), Error);
}

TEST_CASE("phi values enclose the known ones") {
  unsigned bits = 96;
  // |(2,1)-(3,3)| = sqrt(5)
  Enclosure d = phi_value(PhiSpec::dist(), point_box({Rational(2), Rational(1)}),
                          point_box({Rational(3), Rational(3)}), bits);
  CHECK(d.lo * d.lo <= 5);
  CHECK(d.hi * d.hi >= 5);
  CHECK(d.width() <= pow2(-80));

  Enclosure t = phi_value(PhiSpec::dot(), point_box({Rational(1), Rational(1)}),
                          point_box({Rational(1, 2), Rational(1)}), bits);
  CHECK(t.contains(Rational(3, 2)));

  // 3-norm of (1,1) is 2^(1/3)
  Enclosure n = phi_value(PhiSpec::pnorm(3), point_box({Rational(0), Rational(0)}),
                          point_box({Rational(1), Rational(1)}), bits);
  CHECK(pow_int(n, 3, bits).contains(Rational(2)));
}

TEST_CASE("exact sign predicates") {
  RationalPoint x{Rational(2), Rational(1)};
  RationalPoint y{Rational(3), Rational(3)};
  // |x-y| = sqrt(5) vs t
  CHECK(*exact_sign_phi_minus_t(PhiSpec::dist(), x, y, Rational(2)) > 0);
  CHECK(*exact_sign_phi_minus_t(PhiSpec::dist(), x, y, Rational(3)) < 0);
  CHECK(*exact_sign_phi_minus_t(PhiSpec::dot(), x, y, Rational(9)) == 0);
  CHECK(*exact_sign_phi_minus_t(PhiSpec::pnorm(3), {Rational(0), Rational(0)},
                                {Rational(1), Rational(0)}, Rational(1)) == 0);
  CHECK(!exact_sign_phi_minus_t(PhiSpec::pnorm(Rational(3, 2)), x, y, Rational(1)).has_value());
}

TEST_CASE("derivative condition: dot product on [1/2,1]^2") {
  auto verdict =
      certify_derivative_condition(PhiSpec::dot(), box(1, 2, 1, 2, 2), box(1, 2, 1, 2, 2), 64);
  REQUIRE(verdict.certified);
  CHECK(verdict.m1 == Rational(1, 2));
  CHECK(verdict.m2 == Rational(1, 2));
}

TEST_CASE("derivative condition: euclidean with separated boxes") {
  Box2 a = parse_box("[0,1/4]x[0,1/4]");
  Box2 b = parse_box("[3/5,1]x[3/5,1]");
  auto verdict = certify_derivative_condition(PhiSpec::dist(), a, b, 96);
  REQUIRE(verdict.certified);
  CHECK(verdict.m1 > 0);
  CHECK(verdict.m2 > 0);
  // |d|x-y||/dy_i| = |y_i-x_i|/|x-y| >= (3/5-1/4)/sqrt(2)
  CHECK(verdict.m1 <= Rational(7, 20));
  CHECK(to_double(verdict.m1) >= (3.0 / 5 - 1.0 / 4) / std::sqrt(2.0) - 1e-9);
}

TEST_CASE("derivative condition: shared coordinate line fails with a witness") {
  Box2 a = parse_box("[0,1/2]x[0,1/4]");
  Box2 b = parse_box("[1/2,1]x[3/5,1]");  // x-ranges touch at 1/2
  auto verdict = certify_derivative_condition(PhiSpec::dist(), a, b, 64);
  CHECK(!verdict.certified);
  REQUIRE(verdict.witness_a.has_value());
  CHECK(verdict.witness_a->x.contains(Rational(1, 2)));

  auto axis = certify_derivative_condition(PhiSpec::dot(), parse_box("[-1,1]x[1,2]"),
                                           parse_box("[0,1]x[0,1]"), 64);
  CHECK(!axis.certified);
  REQUIRE(axis.witness_a.has_value());
  CHECK(axis.witness_a->x.lo == 0);
}

TEST_CASE("property: derivative certification survives box shrinking") {
  std::mt19937_64 rng(0xFACE);
  std::uniform_int_distribution<int> c(0, 40);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 100; ++trial) {
    int a0 = c(rng), b0 = a0 + 1 + c(rng) % 8;
    Box2 A{{Rational(a0, 41), Rational(a0 + 4, 41)}, {Rational(a0, 37), Rational(a0 + 3, 37)}};
    Box2 B{{Rational(b0 + 5, 41), Rational(b0 + 9, 41)},
           {Rational(b0 + 4, 37), Rational(b0 + 8, 37)}};
    auto verdict = certify_derivative_condition(PhiSpec::dist(), A, B, 96);
    if (!verdict.certified) continue;
    ++tested;
    // shrink both boxes toward their centers; certification must persist and
    // the bounds cannot get worse
    auto shrink = [](const Box2& box) {
      auto half = [](const ClosedInterval& iv) {
        Rational q = iv.width() / 4;
        return ClosedInterval{iv.lo + q, iv.hi - q};
      };
      return Box2{half(box.x), half(box.y)};
    };
    auto sub = certify_derivative_condition(PhiSpec::dist(), shrink(A), shrink(B), 96);
    REQUIRE(sub.certified);
    CHECK(sub.m1 >= verdict.m1);
    CHECK(sub.m2 >= verdict.m2);
  }
  CHECK(tested == 100);
}

TEST_CASE("lipschitz bound dominates sampled gradients") {
  Box2 X = parse_box("[9/10,11/10]x[9/10,11/10]");
  Box2 Y = parse_box("[0,1]x[0,1]");
  Rational l_dot = lipschitz_upper(PhiSpec::dot(), X, Y, 64);
  // |grad_y (x.y)| = |x| <= sqrt(2)*1.1
  CHECK(to_double(l_dot) >= std::sqrt(2.0) * 1.1 - 1e-9);
  CHECK(to_double(l_dot) <= std::sqrt(2.0) * 1.1 + 1e-6);
  CHECK(lipschitz_upper(PhiSpec::dist(), X, Y, 64) == 1);
}
