#include "taucert/newhouse.hpp"

#include <algorithm>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"

namespace taucert {

LinkedVerdict linked(const ClosedInterval& a, const ClosedInterval& b) {
  LinkedVerdict v;
  if (a.lo <= b.lo) {
    v.left_hull = a;
    v.right_hull = b;
  } else {
    v.left_hull = b;
    v.right_hull = a;
  }
  // Interiors must overlap...
  bool overlap = a.lo < b.hi && b.lo < a.hi && a.lo < a.hi && b.lo < b.hi;
  if (!overlap) {
    v.reason = LinkReason::disjoint;
    return v;
  }
  // ...with neither open interval containing the other.
  bool a_in_b = b.lo <= a.lo && a.hi <= b.hi;
  bool b_in_a = a.lo <= b.lo && b.hi <= a.hi;
  if (a_in_b || b_in_a) {
    v.reason = LinkReason::containment;
    return v;
  }
  v.linked = true;
  v.reason = LinkReason::linked;
  return v;
}

LinkedVerdict linked(const StageSet& a, const StageSet& b) {
  return linked(a.hull(), b.hull());
}

namespace {

// Where an exact rational sits relative to a stage set.
struct Location {
  enum Kind { inside_interval, inside_gap, outside } kind;
  std::size_t index = 0;  // interval index or bounded-gap index
};

Location locate(const StageSet& set, const Rational& v) {
  const auto& ivs = set.intervals();
  std::size_t lo = 0, hi = ivs.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (ivs[mid].hi < v) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < ivs.size() && ivs[lo].contains(v)) return {Location::inside_interval, lo};
  if (lo == 0 || lo >= ivs.size()) return {Location::outside, 0};
  return {Location::inside_gap, lo - 1};  // between intervals lo-1 and lo
}

ClosedInterval gap_interval(const StageSet& set, std::size_t gap_index) {
  const auto& ivs = set.intervals();
  return {ivs[gap_index].hi, ivs[gap_index + 1].lo};
}

// Thickness with "no bounded gap" treated as passing any product test.
std::optional<Rational> tau_or_nullopt(const StageSet& s) {
  if (bounded_gaps(s).empty()) return std::nullopt;
  return thickness(s).tau;
}

IntersectionWitness finish_exact(const StageSet& a, const StageSet& b, const Rational& point,
                                 std::vector<TracePair> trace) {
  Location la = locate(a, point);
  Location lb = locate(b, point);
  if (la.kind != Location::inside_interval || lb.kind != Location::inside_interval)
    fail(ErrorCode::invalid_argument, "internal: witness point not in both sets");
  auto shared = intersect(a.intervals()[la.index], b.intervals()[lb.index]);
  IntersectionWitness w;
  w.shared = *shared;
  w.point = shared->mid();
  w.trace = std::move(trace);
  w.quality = WitnessQuality::exact;
  return w;
}

}  // namespace

IntersectionWitness gap_lemma_intersect(const StageSet& a, const StageSet& b,
                                        const Rational& tol) {
  if (tol <= 0) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  LinkedVerdict lv = linked(a, b);
  if (!lv.linked)
    fail(ErrorCode::not_linked,
         std::string("gap_lemma_intersect: sets are not linked (") +
             (lv.reason == LinkReason::disjoint ? "interiors disjoint" : "containment") + ")");
  auto ta = tau_or_nullopt(a);
  auto tb = tau_or_nullopt(b);
  if (ta && tb && *ta * *tb < 1)
    fail(ErrorCode::thickness_product,
         "gap_lemma_intersect: tau(A)*tau(B) = " + to_string(*ta * *tb) + " < 1");

  // Order the sets so X's hull starts strictly left of Y's.
  const StageSet& x = a.hull().lo < b.hull().lo ? a : b;
  const StageSet& y = a.hull().lo < b.hull().lo ? b : a;
  auto as_ab = [&](const ClosedInterval& gx, const ClosedInterval& gy) {
    return (&x == &a) ? TracePair{gx, gy} : TracePair{gy, gx};
  };

  std::vector<TracePair> trace;

  // Initialization: p = min(Y) sits strictly inside hull(X).
  Rational p = y.hull().lo;
  Location in_x = locate(x, p);
  if (in_x.kind == Location::inside_interval) return finish_exact(a, b, p, {});
  ClosedInterval gap_x = gap_interval(x, in_x.index);
  Rational xr = gap_x.hi;  // right endpoint of X's gap, a point of X
  Location in_y = locate(y, xr);
  if (in_y.kind == Location::inside_interval) return finish_exact(a, b, xr, {});
  std::size_t gx_idx = in_x.index;
  std::size_t gy_idx = in_y.index;
  // invariant at this point: gap_x.lo < gap_y.lo < gap_x.hi < gap_y.hi

  std::size_t max_steps = x.size() + y.size() + 4;
  for (std::size_t step = 0; step < max_steps; ++step) {
    ClosedInterval gx = gap_interval(x, gx_idx);
    ClosedInterval gy = gap_interval(y, gy_idx);
    trace.push_back(as_ab(gx, gy));

    // Orientation: which gap pokes left of the other.
    bool x_left = gx.lo < gy.lo;
    const StageSet& left_set = x_left ? x : y;
    const StageSet& right_set = x_left ? y : x;
    ClosedInterval gl = x_left ? gx : gy;  // left gap, of left_set
    ClosedInterval gr = x_left ? gy : gx;  // right gap, of right_set
    std::size_t gl_idx = x_left ? gx_idx : gy_idx;
    std::size_t gr_idx = x_left ? gy_idx : gx_idx;

    // Bridges on the facing sides.
    ClosedInterval bridge_r =
        bridge(right_set, GapEndpoint{gr_idx, GapSide::left}, Rational(0));
    ClosedInterval bridge_l =
        bridge(left_set, GapEndpoint{gl_idx, GapSide::right}, Rational(0));

    if (gl.width() <= bridge_r.width()) {
      // The left gap's far endpoint lies inside the right set's bridge.
      Rational e = gl.lo;  // a point of left_set
      Location loc = locate(right_set, e);
      if (loc.kind == Location::inside_interval) return finish_exact(a, b, e, trace);
      if (loc.kind != Location::inside_gap)
        fail(ErrorCode::invalid_argument, "internal: descent endpoint left the hull");
      ClosedInterval next = gap_interval(right_set, loc.index);
      if (!(next.width() < gr.width()))
        fail(ErrorCode::invalid_argument, "internal: descent failed to shrink");
      (x_left ? gy_idx : gx_idx) = loc.index;
      continue;
    }
    if (gr.width() <= bridge_l.width()) {
      Rational e = gr.hi;  // a point of right_set
      Location loc = locate(left_set, e);
      if (loc.kind == Location::inside_interval) return finish_exact(a, b, e, trace);
      if (loc.kind != Location::inside_gap)
        fail(ErrorCode::invalid_argument, "internal: descent endpoint left the hull");
      ClosedInterval next = gap_interval(left_set, loc.index);
      if (!(next.width() < gl.width()))
        fail(ErrorCode::invalid_argument, "internal: descent failed to shrink");
      (x_left ? gx_idx : gy_idx) = loc.index;
      continue;
    }
    // tau(A)*tau(B) >= 1 guarantees one of the two branches applies.
    fail(ErrorCode::invalid_argument, "internal: gap descent stuck despite thickness product");
  }
  fail(ErrorCode::invalid_argument, "internal: gap descent exceeded its step bound");
}

namespace {

// Certified location of an enclosed value against an exact stage set,
// escalating precision until the enclosure either separates from the set or
// shrinks below tol while touching it.
struct EnclosedLocation {
  enum Kind { inside_interval, inside_gap, touching } kind;
  std::size_t index = 0;
  Enclosure value;
};

EnclosedLocation locate_enclosed(const StageSet& set, const MonotoneMap& g, const Rational& z,
                                 const Rational& tol, Precision prec) {
  for (Precision p = prec;; p = p.next()) {
    Enclosure e = g.value(z, p.bits);
    const auto& ivs = set.intervals();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      if (e.lo >= ivs[i].lo && e.hi <= ivs[i].hi) return {EnclosedLocation::inside_interval, i, e};
      if (i + 1 < ivs.size() && e.lo > ivs[i].hi && e.hi < ivs[i + 1].lo)
        return {EnclosedLocation::inside_gap, i, e};
    }
    if (e.width() <= tol) {
      // Touching an endpoint: report the interval it overlaps.
      for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (e.hi >= ivs[i].lo && e.lo <= ivs[i].hi) return {EnclosedLocation::touching, i, e};
      }
      fail(ErrorCode::invalid_argument, "internal: enclosed point left the hull");
    }
    if (p.next().exhausted())
      fail(ErrorCode::precision_exhausted, "locate_enclosed: ambiguous at the precision cap");
  }
}

// Certified comparison of an exact rational against g(z); nullopt when the
// values coincide to within tol.
std::optional<bool> certified_less_than_image(const Rational& v, const MonotoneMap& g,
                                              const Rational& z, const Rational& tol,
                                              Precision prec) {
  for (Precision p = prec;; p = p.next()) {
    Enclosure e = g.value(z, p.bits);
    if (v < e.lo) return true;
    if (v > e.hi) return false;
    if (e.width() <= tol) return std::nullopt;
    if (p.next().exhausted())
      fail(ErrorCode::precision_exhausted,
           "image comparison ambiguous at the precision cap");
  }
}

}  // namespace

IntersectionWitness gap_sequence_intersect_image(const StageSet& k1, const StageSet& k2,
                                                 const MonotoneMap& g, const Rational& tol,
                                                 Precision prec) {
  if (tol <= 0) fail(ErrorCode::invalid_argument, "tolerance must be positive");

  // The image argument leans on the middle-thirds gap/bridge equalities;
  // require both sets to be sections of that construction.
  for (const StageSet* s : {&k1, &k2}) {
    if (s->descriptor().empty() || !is_middle_thirds_section(parse_set_spec(s->descriptor())))
      fail(ErrorCode::invalid_argument,
           "gap_sequence_intersect_image: sets must be sections of the middle-thirds "
           "construction");
  }

  auto deriv = certify_abs_derivative_range(g, k1.hull(), Rational(1), Rational(3),
                                            kDerivativeSubdivisionBudget, prec.bits);
  if (!deriv.certified)
    fail(ErrorCode::derivative_condition,
         "gap_sequence_intersect_image: 1 < |g'| < 3 not certified on hull(K1)");

  // Certified linkedness of K2 and g(K1).
  Enclosure img_lo = g.value(g.increasing() ? k1.hull().lo : k1.hull().hi, prec.bits);
  Enclosure img_hi = g.value(g.increasing() ? k1.hull().hi : k1.hull().lo, prec.bits);
  ClosedInterval h2 = k2.hull();
  bool link_certified = false;
  for (Precision p = prec; !p.exhausted(); p = p.next()) {
    img_lo = g.value(g.increasing() ? k1.hull().lo : k1.hull().hi, p.bits);
    img_hi = g.value(g.increasing() ? k1.hull().hi : k1.hull().lo, p.bits);
    bool img_left = img_lo.hi < h2.lo && h2.lo < img_hi.lo && img_hi.hi < h2.hi;
    bool img_right = h2.lo < img_lo.lo && img_lo.hi < h2.hi && h2.hi < img_hi.lo;
    if (img_left || img_right) {
      link_certified = true;
      break;
    }
  }
  if (!link_certified)
    fail(ErrorCode::not_linked,
         "gap_sequence_intersect_image: K2 and g(K1) not certified linked");

  auto bgs1 = bounded_gaps(k1);
  auto bgs2 = bounded_gaps(k2);

  auto preimage_gap = [&](std::size_t i) { return ClosedInterval{*bgs1[i].left, *bgs1[i].right}; };
  auto k2_gap = [&](std::size_t i) { return ClosedInterval{*bgs2[i].left, *bgs2[i].right}; };

  // Image interval of a preimage gap, for the trace.
  auto image_gap_enclosure = [&](std::size_t i, unsigned bits) {
    Enclosure a = g.value(*bgs1[i].left, bits);
    Enclosure b = g.value(*bgs1[i].right, bits);
    return ClosedInterval{rat_min(a.lo, b.lo), rat_max(a.hi, b.hi)};
  };

  std::vector<TracePair> trace;
  auto push_trace = [&](std::size_t v_idx, std::size_t u_idx) {
    trace.push_back(TracePair{image_gap_enclosure(v_idx, prec.bits), k2_gap(u_idx)});
  };

  auto within_tol_witness = [&](const Rational& point, const ClosedInterval& shared,
                                WitnessQuality quality) {
    IntersectionWitness w;
    w.point = point;
    w.shared = shared;
    w.trace = std::move(trace);
    w.quality = quality;
    return w;
  };

  // Locates g(z) against K2; returns a witness (nullopt index) or a K2 gap.
  auto step_image_point = [&](const Rational& z) -> std::pair<std::optional<std::size_t>,
                                                              IntersectionWitness> {
    EnclosedLocation loc = locate_enclosed(k2, g, z, tol, prec);
    if (loc.kind == EnclosedLocation::inside_gap) return {loc.index, {}};
    const ClosedInterval& iv = k2.intervals()[loc.index];
    Rational inside = rat_max(iv.lo, rat_min(iv.hi, loc.value.mid()));
    WitnessQuality q = loc.kind == EnclosedLocation::inside_interval
                           ? WitnessQuality::certified_enclosure
                           : WitnessQuality::within_tol;
    auto shared = intersect(iv, ClosedInterval{loc.value.lo, loc.value.hi});
    return {std::nullopt,
            within_tol_witness(inside, shared.value_or(ClosedInterval{inside, inside}), q)};
  };

  // Locates an exact K2 point against the image of K1; returns a witness or a
  // preimage gap index of K1.
  auto step_exact_point = [&](const Rational& u) -> std::pair<std::optional<std::size_t>,
                                                              IntersectionWitness> {
    // Binary search over K1's intervals in image order.
    const auto& ivs = k1.intervals();
    bool inc = g.increasing();
    auto img_endpoint = [&](std::size_t idx, bool upper) {
      // Preimage endpoint whose image is the (lower/upper) end of interval idx.
      const ClosedInterval& iv = ivs[idx];
      return (inc == upper) ? iv.hi : iv.lo;
    };
    std::size_t lo = 0, hi = ivs.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      std::size_t idx = inc ? mid : ivs.size() - 1 - mid;
      auto less = certified_less_than_image(u, g, img_endpoint(idx, true), tol, prec);
      if (!less.has_value()) {
        // u coincides with an image endpoint to within tol.
        return {std::nullopt,
                within_tol_witness(u, ClosedInterval{u, u}, WitnessQuality::within_tol)};
      }
      if (*less) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo >= ivs.size())
      fail(ErrorCode::invalid_argument, "internal: K2 endpoint above the image hull");
    std::size_t idx = inc ? lo : ivs.size() - 1 - lo;
    // u <= image-top of interval idx; decide against its bottom endpoint.
    auto above_bottom = certified_less_than_image(u, g, img_endpoint(idx, false), tol, prec);
    if (!above_bottom.has_value())
      return {std::nullopt,
              within_tol_witness(u, ClosedInterval{u, u}, WitnessQuality::within_tol)};
    if (!*above_bottom) {
      // Strictly inside the image of interval idx: a true common point.
      return {std::nullopt, within_tol_witness(u, ClosedInterval{u, u}, WitnessQuality::exact)};
    }
    // Inside the image gap below interval idx (in image order).
    if (lo == 0)
      fail(ErrorCode::invalid_argument, "internal: K2 endpoint below the image hull");
    std::size_t preimage_gap_idx = inc ? idx - 1 : idx;
    return {preimage_gap_idx, {}};
  };

  // Initialization mirrors the exact descent, with certified comparisons.
  std::optional<std::size_t> u_idx;  // gap of K2
  std::optional<std::size_t> v_idx;  // preimage gap of K1
  bool img_starts_left = img_lo.hi < h2.lo;
  if (img_starts_left) {
    // p = min K2 sits inside the image hull.
    auto [vi, wit] = step_exact_point(h2.lo);
    if (!vi) return wit;
    v_idx = vi;
    // advance with the image of the preimage gap's right endpoint
    Rational z = g.increasing() ? preimage_gap(*v_idx).hi : preimage_gap(*v_idx).lo;
    auto [ui, wit2] = step_image_point(z);
    if (!ui) return wit2;
    u_idx = ui;
  } else {
    // p = image hull's lower end sits inside hull(K2).
    Rational z0 = g.increasing() ? k1.hull().lo : k1.hull().hi;
    auto [ui, wit] = step_image_point(z0);
    if (!ui) return wit;
    u_idx = ui;
    auto [vi, wit2] = step_exact_point(k2_gap(*u_idx).hi);
    if (!vi) return wit2;
    v_idx = vi;
  }

  std::size_t max_steps = k1.size() + k2.size() + 4;
  for (std::size_t step = 0; step < max_steps; ++step) {
    push_trace(*v_idx, *u_idx);
    ClosedInterval u = k2_gap(*u_idx);
    ClosedInterval v = preimage_gap(*v_idx);
    if (u.width() > v.width()) {
      // |U| > |V| forces |B^U| > |g(V)|: the image endpoint of V beyond U's
      // bridge side lands in a strictly smaller gap of K2 (or in K2 itself).
      // Try both endpoints of V; the non-advancing one stays inside U.
      bool advanced = false;
      for (const Rational& z : {v.lo, v.hi}) {
        auto [ui, wit] = step_image_point(z);
        if (!ui) return wit;
        if (*ui != *u_idx) {
          if (!(k2_gap(*ui).width() < u.width()))
            fail(ErrorCode::invalid_argument, "internal: image descent failed to shrink");
          u_idx = *ui;
          advanced = true;
          break;
        }
      }
      if (!advanced)
        fail(ErrorCode::invalid_argument, "internal: image descent stalled");
    } else {
      // |U| <= |V| forces |g(B^V)| > |U|: an endpoint of U lands in a smaller
      // image gap (or in the image).
      bool advanced = false;
      for (const Rational& w : {u.lo, u.hi}) {
        auto [vi, wit] = step_exact_point(w);
        if (!vi) return wit;
        if (*vi != *v_idx) {
          v_idx = *vi;
          advanced = true;
          break;
        }
      }
      if (!advanced)
        fail(ErrorCode::invalid_argument, "internal: image descent stalled");
    }
  }
  fail(ErrorCode::invalid_argument, "internal: image descent exceeded its step bound");
}

}  // namespace taucert
