#include <doctest.h>

#include <cmath>
#include <random>

#include "taucert/errors.hpp"
#include "taucert/thickness.hpp"

using namespace taucert;

namespace {

ClosedInterval unit{Rational(0), Rational(1)};

// Independent reference: enumerate every candidate terminator (bounded gaps
// plus the two rays) and take the qualifying one at minimal distance, by
// explicit minimization rather than an ordered scan.
Rational naive_bridge_width(const StageSet& set, std::size_t gap_index, GapSide side,
                            const Rational& eps) {
  auto bgs = bounded_gaps(set);
  const Gap& g = bgs[gap_index];
  Rational gw = g.width();
  auto ok = [&](const Rational& w) { return eps == 0 ? w >= gw : w > (1 - eps) * gw; };
  Rational u = side == GapSide::right ? *g.right : *g.left;
  Rational best = side == GapSide::right ? set.hull().hi - u : u - set.hull().lo;
  for (std::size_t j = 0; j < bgs.size(); ++j) {
    if (j == gap_index) continue;
    if (side == GapSide::right && *bgs[j].left > u && ok(bgs[j].width()))
      best = rat_min(best, *bgs[j].left - u);
    if (side == GapSide::left && *bgs[j].right < u && ok(bgs[j].width()))
      best = rat_min(best, u - *bgs[j].right);
  }
  return best;
}

Rational naive_tau(const StageSet& set, const Rational& eps) {
  auto bgs = bounded_gaps(set);
  REQUIRE(!bgs.empty());
  Rational tau;
  bool first = true;
  for (std::size_t i = 0; i < bgs.size(); ++i) {
    for (GapSide side : {GapSide::left, GapSide::right}) {
      Rational ratio = naive_bridge_width(set, i, side, eps) / bgs[i].width();
      if (first || ratio < tau) tau = ratio;
      first = false;
    }
  }
  return tau;
}

}  // namespace

TEST_CASE("middle thirds thickness is exactly 1") {
  for (unsigned depth = 1; depth <= 6; ++depth) {
    StageSet s = build_middle_set(Rational(1, 3), unit, depth);
    CHECK(thickness(s).tau == 1);
  }
}

TEST_CASE("middle-(2/k) thickness is exactly (k-2)/4") {
  for (int k : {6, 10, 40}) {
    for (unsigned depth = 1; depth <= 5; ++depth) {
      StageSet s = build_middle_set(Rational(2, k), unit, depth);
      CHECK(thickness(s).tau == Rational(k - 2, 4));
    }
  }
}

TEST_CASE("middle-fifth stage 3 has thickness 2, agreeing with the naive scan") {
  StageSet s = build_middle_set(Rational(1, 5), unit, 3);
  ThicknessReport report = thickness(s);
  CHECK(report.tau == 2);
  CHECK(report.tau == naive_tau(s, Rational(0)));
  CHECK(report.entries.size() == 2 * bounded_gaps(s).size());
}

TEST_CASE("bridge examples on middle thirds stage 2") {
  StageSet s2 = build_middle_set(Rational(1, 3), unit, 2);
  ClosedInterval b1 = bridge(s2, Rational(2, 3), Rational(0));
  CHECK(b1 == ClosedInterval{Rational(2, 3), Rational(1)});
  ClosedInterval b2 = bridge(s2, Rational(2, 9), Rational(0));
  CHECK(b2 == ClosedInterval{Rational(2, 9), Rational(1, 3)});
  ClosedInterval b3 = bridge(s2, Rational(2, 9), Rational(1, 2));
  CHECK(b3 == ClosedInterval{Rational(2, 9), Rational(1, 3)});
  CHECK_THROWS_AS(bridge(s2, Rational(1, 2), Rational(0)), Error);
}

TEST_CASE("bridge widths match the report entries") {
  StageSet s = build_middle_set(Rational(1, 5), unit, 4);
  ThicknessReport report = thickness(s);
  for (const auto& entry : report.entries) {
    ClosedInterval b = bridge(s, entry.endpoint, Rational(0));
    CHECK(b.width() == entry.bridge_width);
    CHECK(b.width() / entry.gap_width == entry.ratio);
  }
}

TEST_CASE("thickness undefined without bounded gaps") {
  StageSet interval({unit});
  CHECK_THROWS_AS(thickness(interval), Error);
  try {
    thickness(interval);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::thickness_undefined);
  }
}

TEST_CASE("epsilon thickness frozen values") {
  StageSet s4 = build_middle_set(Rational(1, 3), unit, 4);
  CHECK(epsilon_thickness(s4, Rational(1, 2)).tau_eps == 1);
  StageSet f3 = build_middle_set(Rational(1, 5), unit, 3);
  CHECK(epsilon_thickness(f3, Rational(1, 100)).tau_eps == 2);
  CHECK_THROWS_AS(epsilon_thickness(f3, Rational(0)), Error);
  CHECK_THROWS_AS(epsilon_thickness(f3, Rational(1)), Error);
}

TEST_CASE("property: epsilon thickness is monotone, below tau, and stabilizes") {
  std::mt19937_64 rng(0xBEEF);
  std::uniform_int_distribution<int> num(1, 7);
  std::uniform_int_distribution<int> den(8, 20);
  std::uniform_int_distribution<unsigned> depth(2, 5);
  for (int trial = 0; trial < 100; ++trial) {
    StageSet s = build_middle_set(Rational(num(rng), den(rng)), unit, depth(rng));
    Rational tau = thickness(s).tau;
    Rational e1(1, 10), e2(1, 3), e3(2, 3);
    Rational t1 = epsilon_thickness(s, e1).tau_eps;
    Rational t2 = epsilon_thickness(s, e2).tau_eps;
    Rational t3 = epsilon_thickness(s, e3).tau_eps;
    CHECK(t1 >= t2);
    CHECK(t2 >= t3);
    CHECK(t1 <= tau);
    CHECK(t1 == naive_tau(s, e1));
    CHECK(t3 == naive_tau(s, e3));

    Rational floor = epsilon_floor(s);
    CHECK(floor > 0);
    CHECK(epsilon_thickness(s, floor / 2).tau_eps == tau);
  }
}

TEST_CASE("property: thickness is invariant under affine maps, exactly") {
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_int_distribution<int> num(1, 7);
  std::uniform_int_distribution<int> den(8, 20);
  std::uniform_int_distribution<unsigned> depth(1, 5);
  std::uniform_int_distribution<int> coeff(-12, 12);
  for (int trial = 0; trial < 300; ++trial) {
    StageSet s = build_middle_set(Rational(num(rng), den(rng)), unit, depth(rng));
    int sc = coeff(rng);
    if (sc == 0) sc = 5;
    Rational scale(sc, 1 + (trial % 7));
    Rational shift(coeff(rng), 3);
    CHECK(thickness(affine_image(s, scale, shift)).tau == thickness(s).tau);
  }
}

TEST_CASE("hausdorff lower bound") {
  CHECK(hausdorff_lower_bound(1.0) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
  CHECK(hausdorff_lower_bound(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // tau = (k-2)/4 with k = 6 collapses to the middle-thirds value
  CHECK(hausdorff_lower_bound((6.0 - 2.0) / 4.0) ==
        doctest::Approx(0.6309297535714574).epsilon(1e-12));
  CHECK_THROWS_AS(hausdorff_lower_bound(0.0), Error);
  CHECK_THROWS_AS(hausdorff_lower_bound(-1.0), Error);
}
