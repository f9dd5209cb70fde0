#include <doctest.h>

#include <random>

#include "taucert/errors.hpp"
#include "taucert/newhouse.hpp"
#include "taucert/oracle.hpp"
#include "taucert/set_spec.hpp"

using namespace taucert;

namespace {
StageSet fifths(unsigned depth) {
  return build(parse_set_spec("middle:1/5@[0,1]#" + std::to_string(depth)));
}
StageSet thirds(unsigned depth) {
  return build(parse_set_spec("middle:1/3@[0,1]#" + std::to_string(depth)));
}
}  // namespace

TEST_CASE("point enumeration") {
  StageSet c1 = thirds(1);
  auto pts = enumerate_points(c1, c1, PointMode::endpoints);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == RationalPoint{Rational(0), Rational(0)});
  CHECK(pts[3] == RationalPoint{Rational(2, 3), Rational(2, 3)});

  CHECK(enumerate_points(fifths(2), fifths(2), PointMode::midpoints).size() == 16);
  // 2^10 x 2^10 = 2^20 points at stage 10
  StageSet c10 = thirds(10);
  CHECK(enumerate_points(c10, c10, PointMode::endpoints).size() == std::size_t(1) << 20);
  // the cap refuses beyond 2^26
  StageSet c14 = thirds(14);
  CHECK_THROWS_AS(enumerate_points(c14, c14, PointMode::endpoints), Error);
}

TEST_CASE("brute force intersection sweep") {
  StageSet a = thirds(8);
  StageSet b = affine_image(a, Rational(1), Rational(1, 3));
  auto overlap = brute_force_intersection(a, b);
  REQUIRE(overlap.has_value());
  CHECK(a.contains(overlap->lo));
  CHECK(b.contains(overlap->lo));

  CHECK(!brute_force_intersection(a, affine_image(a, Rational(1), Rational(5))).has_value());
  CHECK(brute_force_intersection(a, a).has_value());
  CHECK(*brute_force_intersection(a, a) == a.intervals().front());
}

TEST_CASE("oracle/engine agreement on random linked pairs") {
  std::mt19937_64 rng(0xACCE55);
  std::uniform_int_distribution<int> den(3, 6);
  std::uniform_int_distribution<unsigned> depth(3, 5);
  std::uniform_int_distribution<int> shift(-70, 70);
  int done = 0;
  for (int trial = 0; trial < 4000 && done < 300; ++trial) {
    StageSet a = build_middle_set(Rational(1, den(rng)), {Rational(0), Rational(1)}, depth(rng));
    StageSet b = affine_image(
        build_middle_set(Rational(1, den(rng)), {Rational(0), Rational(1)}, depth(rng)),
        Rational(1), Rational(shift(rng), 100));
    if (!linked(a, b).linked) continue;
    ++done;
    auto witness = gap_lemma_intersect(a, b, Rational(1, 1 << 20));
    auto sweep = brute_force_intersection(a, b);
    REQUIRE(sweep.has_value());
    CHECK(a.contains(witness.point));
    CHECK(b.contains(witness.point));
  }
  CHECK(done == 300);
}

TEST_CASE("dot certificate coverage passes with zero misses") {
  StageSet k = thirds(8);
  DotPinCertificate cert = dot_pin_window(k, k, {Rational(1), Rational(1)}, Rational(1, 10));
  CoverageReport report = check_pin_certificate(cert, {});
  CHECK(report.pass());
  CHECK(report.misses == 0);
  CHECK(report.pin_grid >= 128);
  CHECK(report.t_grid == 128);
  CHECK(report.worst_residual <= to_double(report.resolution));
}

TEST_CASE("distance certificate coverage passes") {
  StageSet k = fifths(6);
  PinCertificate cert = distance_pin_window(k, k, {Rational(0), Rational(0)});
  CoverageReport report = check_pin_certificate(cert, {});
  CHECK(report.pass());
  CHECK(report.worst_residual <= to_double(report.resolution));
}

TEST_CASE("corrupted t-window is caught by coverage") {
  StageSet k = fifths(6);
  PinCertificate cert = distance_pin_window(k, k, {Rational(0), Rational(0)});
  // shift T wholly past the window's reach
  Rational shift = cert.w2.delta * 4 + 1;
  PinCertificate bad = cert;
  bad.t_window.lo += shift;
  bad.t_window.hi += shift;
  CoverageReport report = check_pin_certificate(bad, {});
  CHECK(!report.pass());
  CHECK(report.misses > 0);
}

TEST_CASE("coverage reports are deterministic") {
  StageSet k = fifths(6);
  PinCertificate cert = distance_pin_window(k, k, {Rational(0), Rational(0)});
  CoverageReport a = check_pin_certificate(cert, {});
  CoverageReport b = check_pin_certificate(cert, {});
  CHECK(a.hits == b.hits);
  CHECK(a.misses == b.misses);
  CHECK(a.worst_residual == b.worst_residual);
  CHECK(a.worst_t == b.worst_t);
}

TEST_CASE("depth refusal and deeper re-verification") {
  StageSet k = fifths(6);
  PinCertificate cert = distance_pin_window(k, k, {Rational(0), Rational(0)});
  CoverageParams shallow;
  shallow.depth = 4;
  CHECK_THROWS_AS(check_pin_certificate(cert, shallow), Error);
  CoverageParams deeper;
  deeper.depth = 8;
  CoverageReport report = check_pin_certificate(cert, deeper);
  CHECK(report.pass());
  CHECK(report.depth == 8);
}

TEST_CASE("tree certificate coverage: 1-chain near sqrt(2)-like targets") {
  StageSet k = fifths(6);
  std::vector<RationalPoint> pts{{Rational(0), Rational(0)}, {Rational(3, 5), Rational(21, 25)}};
  Skeleton skel = validate_skeleton(PhiSpec::dist(), chain(1), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dist(), chain(1), skel, k, k);
  CoverageReport report = check_tree_certificate(cert, {});
  CHECK(report.pass());
  CHECK(report.closure_pass);
  CHECK(report.misses == 0);
}

TEST_CASE("tree certificate coverage: 2-chain with chained search") {
  StageSet k = fifths(6);
  std::vector<RationalPoint> pts{{Rational(0), Rational(0)},
                                 {Rational(6, 25), Rational(3, 5)},
                                 {Rational(3, 5), Rational(21, 25)}};
  Skeleton skel = validate_skeleton(PhiSpec::dist(), chain(2), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dist(), chain(2), skel, k, k);
  CoverageReport report = check_tree_certificate(cert, {});
  CHECK(report.pass());

  // falsification control: corrupt one edge interval
  TreeCertificate bad = cert;
  Rational width = bad.edge_intervals[0].width();
  bad.edge_intervals[0].lo += width * 400 + 1;
  bad.edge_intervals[0].hi += width * 400 + 1;
  bad.steps[0].interval = bad.edge_intervals[0];
  // keep internal consistency so only coverage can catch it
  for (auto& step : bad.steps) {
    if (step.input_edge_index == 0) step.interval = bad.edge_intervals[0];
  }
  CoverageReport bad_report = check_tree_certificate(bad, {});
  CHECK(!bad_report.pass());
}
