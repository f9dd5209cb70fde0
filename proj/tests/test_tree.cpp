#include <doctest.h>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"
#include "taucert/tree.hpp"
#include "taucert/tree_certify.hpp"

using namespace taucert;

namespace {
StageSet fifths(unsigned depth) {
  return build(parse_set_spec("middle:1/5@[0,1]#" + std::to_string(depth)));
}
RationalPoint pt(long a, long b, long c, long d) {
  return {Rational(a, b), Rational(c, d)};
}
}  // namespace

TEST_CASE("tree construction and validation") {
  Tree c2 = chain(2);
  CHECK(c2.vertex_count == 3);
  CHECK(c2.edge_count() == 2);
  Tree s3 = star(3);
  CHECK(s3.vertex_count == 4);

  // triangle: 3 vertices, 3 edges
  CHECK_THROWS_AS(make_tree(3, {{1, 2}, {2, 3}, {1, 3}}), Error);
  // disconnected: two components
  CHECK_THROWS_AS(make_tree(4, {{1, 2}, {3, 4}, {1, 2}}), Error);
  try {
    make_tree(3, {{1, 2}, {2, 3}, {1, 3}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::tree_invalid);
  }
}

TEST_CASE("tree text round-trip") {
  Tree t = parse_tree("1 2\n2 3\n");
  CHECK(t.vertex_count == 3);
  CHECK(render(t) == "1 2\n2 3\n");
  CHECK_THROWS_AS(parse_tree("1\n"), Error);
}

TEST_CASE("peel order removes the highest leaf first") {
  auto p2 = peel_order(chain(2));
  REQUIRE(p2.size() == 2);
  CHECK(p2[0] == std::make_pair<std::size_t, std::size_t>(3, 2));
  CHECK(p2[1] == std::make_pair<std::size_t, std::size_t>(2, 1));

  auto ps = peel_order(star(3));
  REQUIRE(ps.size() == 3);
  CHECK(ps[0] == std::make_pair<std::size_t, std::size_t>(4, 1));
  CHECK(ps[1] == std::make_pair<std::size_t, std::size_t>(3, 1));
  CHECK(ps[2] == std::make_pair<std::size_t, std::size_t>(2, 1));

  // after each removal the remainder is still a tree: peel the 4-chain and
  // re-validate the shrinking edge sets
  Tree c4 = chain(4);
  auto order = peel_order(c4);
  std::vector<std::pair<std::size_t, std::size_t>> edges = c4.edges;
  for (const auto& [leaf, nb] : order) {
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&, l = leaf, n = nb](const auto& e) {
                                 return (e.first == l && e.second == n) ||
                                        (e.first == n && e.second == l);
                               }),
                edges.end());
    if (edges.empty()) break;
    std::size_t maxv = 0;
    for (const auto& e : edges) maxv = std::max({maxv, e.first, e.second});
    CHECK_NOTHROW(make_tree(maxv, edges));
  }
}

TEST_CASE("skeleton validation") {
  StageSet k = fifths(3);
  std::vector<RationalPoint> good{pt(0, 1, 0, 1), pt(3, 5, 21, 25)};
  Skeleton s = validate_skeleton(PhiSpec::dist(), chain(1), good, k, k);
  // min per-coordinate separation is 3/5; epsilon one step below 3/10
  CHECK(s.epsilon < Rational(3, 10));
  CHECK(s.epsilon > Rational(3, 10) - Rational(1, 1 << 16));

  // shared coordinate
  CHECK_THROWS_AS(validate_skeleton(PhiSpec::dist(), chain(1),
                                    {pt(0, 1, 0, 1), pt(0, 1, 3, 5)}, k, k),
                  Error);
  // axis point with dot phi
  CHECK_THROWS_AS(validate_skeleton(PhiSpec::dot(), chain(1),
                                    {pt(0, 1, 3, 5), pt(3, 5, 21, 25)}, k, k),
                  Error);
  // membership failure
  CHECK_THROWS_AS(validate_skeleton(PhiSpec::dist(), chain(1),
                                    {pt(0, 1, 0, 1), pt(1, 2, 3, 5)}, k, k),
                  Error);
  // coincident points
  CHECK_THROWS_AS(validate_skeleton(PhiSpec::dist(), chain(1),
                                    {pt(3, 5, 3, 5), pt(3, 5, 3, 5)}, k, k),
                  Error);
}

TEST_CASE("wedge skeleton frozen values and membership") {
  auto pts = middle_thirds_skeleton(3);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == pt(0, 1, 0, 1));
  CHECK(pts[1] == pt(8, 9, 6, 9));
  CHECK(pts[2] == pt(80, 81, 60, 81));
  CHECK(pts[3] == pt(728, 729, 546, 729));
  // wedge membership, exactly, for all ordered pairs
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK(wedge_member(pts[j], pts[i]));
  CHECK(wedge_member(pt(8, 9, 6, 9), pt(0, 1, 0, 1)));  // 6/9 < 8/9 < 18/9
  CHECK(!wedge_member(pt(1, 1, 1, 1), pt(0, 1, 0, 1)));  // diagonal: dx = dy fails
  // all points lie in deep enough middle-thirds stages
  StageSet c8 = build(parse_set_spec("middle:1/3@[0,1]#8"));
  for (const auto& p : pts) {
    CHECK(c8.contains(p.x));
    CHECK(c8.contains(p.y));
  }
}

TEST_CASE("1-chain distance tree on middle fifths") {
  StageSet k = fifths(6);
  std::vector<RationalPoint> pts{pt(0, 1, 0, 1), pt(3, 5, 21, 25)};
  Skeleton skel = validate_skeleton(PhiSpec::dist(), chain(1), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dist(), chain(1), skel, k, k);
  REQUIRE(cert.edge_intervals.size() == 1);
  CHECK(cert.edge_intervals[0].lo < cert.edge_intervals[0].hi);
  // Phi(skeleton) near the interval: |x1 - x2| = sqrt(9/25 + 441/625)
  Rational phi_sq = dist_sq(pts[0], pts[1]);
  Rational lo = cert.edge_intervals[0].lo, hi = cert.edge_intervals[0].hi;
  CHECK(lo * lo <= phi_sq * Rational(102, 100));
  CHECK(hi * hi >= phi_sq * Rational(98, 100));
  reverify_tree_certificate(cert);
}

TEST_CASE("2-chain distance tree with nested radii") {
  StageSet k = fifths(6);
  std::vector<RationalPoint> pts{pt(0, 1, 0, 1), pt(6, 25, 3, 5), pt(3, 5, 21, 25)};
  Skeleton skel = validate_skeleton(PhiSpec::dist(), chain(2), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dist(), chain(2), skel, k, k);
  REQUIRE(cert.edge_intervals.size() == 2);
  for (const auto& iv : cert.edge_intervals) CHECK(iv.lo < iv.hi);
  // radii are non-increasing and boxes nest
  for (std::size_t i = 1; i < cert.radii.size(); ++i) CHECK(cert.radii[i] <= cert.radii[i - 1]);
  reverify_tree_certificate(cert);
}

TEST_CASE("dot tree on middle thirds (tau product exactly 1)") {
  StageSet k = build(parse_set_spec("middle:1/3@[0,1]#6"));
  std::vector<RationalPoint> pts{pt(2, 3, 1, 3), pt(1, 9, 8, 9)};
  Skeleton skel = validate_skeleton(PhiSpec::dot(), chain(1), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dot(), chain(1), skel, k, k);
  REQUIRE(cert.steps.size() == 1);
  CHECK(cert.steps[0].dot.has_value());
  CHECK(cert.edge_intervals[0].lo < cert.edge_intervals[0].hi);
  // closure: the skeleton's dot value is near the window
  Rational phi_skel = pts[0].x * pts[1].x + pts[0].y * pts[1].y;
  CHECK(phi_skel >= cert.edge_intervals[0].lo - Rational(1, 4));
  CHECK(phi_skel <= cert.edge_intervals[0].hi + Rational(1, 4));
  reverify_tree_certificate(cert);
}

TEST_CASE("middle-thirds 2-chain via the wedge engine") {
  TreeCertificate cert = certify_tree_middle_thirds(chain(2), 7);
  CHECK(cert.engine == "middle-thirds");
  CHECK(cert.scope == "limit");
  REQUIRE(cert.edge_intervals.size() == 2);
  for (const auto& iv : cert.edge_intervals) CHECK(iv.lo < iv.hi);
  for (const auto& step : cert.steps) {
    REQUIRE(step.pin.has_value());
    CHECK(step.pin->wedge);
  }
  reverify_tree_certificate(cert);
}

TEST_CASE("tree certificate mutation is rejected") {
  StageSet k = fifths(6);
  std::vector<RationalPoint> pts{pt(0, 1, 0, 1), pt(3, 5, 21, 25)};
  Skeleton skel = validate_skeleton(PhiSpec::dist(), chain(1), pts, k, k);
  TreeCertificate cert = certify_tree(PhiSpec::dist(), chain(1), skel, k, k);

  auto expect_reject = [](const TreeCertificate& bad) {
    try {
      reverify_tree_certificate(bad);
      return false;
    } catch (const Error& e) {
      return e.code() == ErrorCode::verify_failed;
    }
  };

  TreeCertificate bad = cert;
  bad.edge_intervals[0].hi += Rational(1, 100);
  CHECK(expect_reject(bad));
  bad = cert;
  bad.skeleton.epsilon *= 2;
  CHECK(expect_reject(bad));
  bad = cert;
  bad.radii[0] *= 2;
  CHECK(expect_reject(bad));
  bad = cert;
  bad.steps[0].interval.lo -= Rational(1, 100);
  CHECK(expect_reject(bad));
}
