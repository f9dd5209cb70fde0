#include <doctest.h>

#include <random>

#include "taucert/errors.hpp"
#include "taucert/image_bound.hpp"
#include "taucert/set_spec.hpp"

using namespace taucert;

namespace {
ClosedInterval unit{Rational(0), Rational(1)};
}

TEST_CASE("affine maps have zero ratio deviation and exact inner images") {
  StageSet k = build_middle_set(Rational(1, 5), unit, 4);
  AffineMap m(Rational(3), Rational(1, 2));
  auto dev = ratio_deviation_upper(m, unit, 96);
  REQUIRE(dev.has_value());
  CHECK(*dev == 0);

  Rational eps(1, 10);
  ClosedInterval window{Rational(3, 5), Rational(1)};
  Rational bound = image_thickness_lower_bound(k, window, m, eps, 96);
  StageSet image = map_stage_inner(restrict(k, window), m);
  Rational direct = thickness(image).tau;
  CHECK(bound <= direct);
  CHECK(direct == 2);  // affine image of a middle-fifth section keeps tau = 2
  CHECK(bound == epsilon_thickness(restrict(k, window), eps).tau_eps * Rational(9, 10));
}

TEST_CASE("distance curve image bound stays below the directly computed thickness") {
  StageSet k = build_middle_set(Rational(1, 5), unit, 6);
  // pin (0,0), t^2 = 2; window = the [3/5, 19/25] construction block
  DistanceCurveMap g({Rational(0), Rational(0)}, Rational(2));
  ClosedInterval window{Rational(3, 5), Rational(19, 25)};
  auto dev = ratio_deviation_upper(g, window, 128);
  REQUIRE(dev.has_value());
  CHECK(*dev > 0);
  Rational eps = rat_min(*dev * 2, Rational(1, 2));
  Rational bound = image_thickness_lower_bound(k, window, g, eps, 128);
  StageSet image = map_stage_inner(restrict(k, window), g);
  CHECK(bound <= thickness(image).tau);
}

TEST_CASE("image bound error paths") {
  StageSet k = build_middle_set(Rational(1, 5), unit, 4);
  AffineMap m(Rational(2), Rational(0));
  // epsilon out of range
  CHECK_THROWS_AS(image_thickness_lower_bound(k, unit, m, Rational(0), 64), Error);
  // epsilon too small for a genuinely varying derivative
  DistanceCurveMap g({Rational(0), Rational(0)}, Rational(2));
  ClosedInterval window{Rational(3, 5), Rational(1)};
  Rational dev = *ratio_deviation_upper(g, window, 128);
  CHECK_THROWS_AS(image_thickness_lower_bound(k, window, g, dev / 2, 128), Error);
  // window with no bounded gap: thickness undefined
  ClosedInterval tiny{Rational(0), Rational(1, 50)};
  CHECK_THROWS_AS(image_thickness_lower_bound(k, tiny, m, Rational(1, 10), 64), Error);
}

TEST_CASE("property: certified bound never exceeds the mapped stage thickness") {
  std::mt19937_64 rng(0x1A6E);
  StageSet k = build_middle_set(Rational(1, 5), unit, 6);
  const auto& ivs = k.intervals();
  std::uniform_int_distribution<std::size_t> pick(0, ivs.size() - 2);
  std::uniform_int_distribution<int> tnum(3, 9);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 100; ++trial) {
    // window spanning a few consecutive stage intervals
    std::size_t i = pick(rng);
    std::size_t j = std::min(ivs.size() - 1, i + 1 + static_cast<std::size_t>(rng() % 8));
    ClosedInterval window{ivs[i].lo, ivs[j].hi};
    Rational t_sq(tnum(rng), 2);
    Rational far = rat_max(rat_abs(window.lo), rat_abs(window.hi));
    if (t_sq <= far * far + Rational(1, 10)) continue;  // keep the radicand safe
    DistanceCurveMap g({Rational(0), Rational(0)}, t_sq);
    auto dev = ratio_deviation_upper(g, window, 128);
    if (!dev) continue;
    Rational eps = rat_min(*dev * 2 + Rational(1, 1000), Rational(1, 2));
    Rational bound;
    try {
      bound = image_thickness_lower_bound(k, window, g, eps, 128);
    } catch (const Error&) {
      continue;  // window without bounded gaps
    }
    StageSet image = map_stage_inner(restrict(k, window), g);
    Rational direct = thickness(image).tau;
    CHECK(bound <= direct);
    ++done;
  }
  CHECK(done == 100);
}
