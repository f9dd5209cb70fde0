#include "taucert/pin_wiggle.hpp"

#include <algorithm>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"

namespace taucert {

namespace {

constexpr unsigned kCoarseBits = 48;

// ---------------------------------------------------------------------------
// canonical frames: v' = reflect ? 2*center - v : v (an involution)
// ---------------------------------------------------------------------------

struct AxisFrame {
  bool reflect = false;
  Rational center = 0;

  Rational map(const Rational& v) const { return reflect ? 2 * center - v : v; }
  ClosedInterval map(const ClosedInterval& iv) const {
    return reflect ? ClosedInterval{map(iv.hi), map(iv.lo)} : iv;
  }
};

StageSet transform(const StageSet& s, const AxisFrame& f) {
  if (!f.reflect) return s;
  return affine_image(s, Rational(-1), 2 * f.center);
}

std::optional<MiddleFamily> transform(const std::optional<MiddleFamily>& fam,
                                      const AxisFrame& f) {
  if (!fam || !f.reflect) return fam;
  return MiddleFamily{fam->ratio, f.map(fam->base_hull)};
}

// ---------------------------------------------------------------------------
// window selection (canonical coordinates: window always extends rightward)
// ---------------------------------------------------------------------------

struct WindowChoice {
  Rational u;
  Rational delta;   // current width; shrinks along the descent ladder
  bool trivial;     // [u, u+delta] is a single stage interval
};

// Gap right-endpoints of `k` strictly above `floor_x` (the pin coordinate),
// or with no constraint when floor_x is absent.  Anchored selection also
// admits the hull minimum: a leaf box can clip away the gap whose right
// endpoint seeds the window, and that endpoint is then interval 0's start.
std::vector<std::size_t> candidate_interval_indices(const StageSet& k,
                                                    const std::optional<Rational>& floor_x,
                                                    bool include_hull_min) {
  std::vector<std::size_t> out;
  for (std::size_t i = include_hull_min ? 0 : 1; i < k.size(); ++i) {
    if (!floor_x || k.intervals()[i].lo > *floor_x) out.push_back(i);
  }
  return out;
}

// Initial window at a gap right-endpoint: the widest aligned construction
// block when the set belongs to a middle family (keeps the restricted
// thickness equal to the full construction's), otherwise the bridge width
// snapped down to a stage endpoint.
std::optional<WindowChoice> initial_window(const StageSet& k,
                                           const std::optional<MiddleFamily>& family,
                                           std::size_t interval_index) {
  Rational u = k.intervals()[interval_index].lo;
  Rational room = k.hull().hi - u;
  Rational cap = room;
  if (interval_index > 0) {
    ClosedInterval b = bridge(k, GapEndpoint{interval_index - 1, GapSide::right}, Rational(0));
    cap = rat_min(room, b.width());
  }
  if (family) {
    if (auto block = aligned_block_at(*family, u, cap)) {
      return WindowChoice{u, block->width(), false};
    }
  }
  auto snapped = snap_down_to_endpoint(k, u + cap);
  if (!snapped || *snapped <= u) return std::nullopt;
  return WindowChoice{u, *snapped - u, false};
}

// One step down the descent ladder; false when the window cannot shrink.
bool shrink_window(const StageSet& k, const std::optional<MiddleFamily>& family,
                   WindowChoice& w) {
  if (family) {
    Rational next = w.delta * (1 - family->ratio) / 2;
    if (next <= 0) return false;
    w.delta = next;
    return true;
  }
  auto snapped = snap_down_to_endpoint(k, w.u + w.delta / 2);
  if (!snapped || *snapped <= w.u) return false;
  w.delta = *snapped - w.u;
  return true;
}

// Selection per the certificate policy: anchored mode takes the gap endpoint
// nearest the anchor; default mode the widest admissible gap.  Falls back to
// a single whole interval when the set has no admissible gap.
std::optional<WindowChoice> select_window(const StageSet& k,
                                          const std::optional<MiddleFamily>& family,
                                          const std::optional<Rational>& floor_x,
                                          const std::optional<Rational>& anchor) {
  auto candidates = candidate_interval_indices(k, floor_x, anchor.has_value());
  if (!candidates.empty()) {
    std::size_t best = candidates.front();
    if (anchor) {
      Rational best_d = rat_abs(k.intervals()[best].lo - *anchor);
      for (std::size_t idx : candidates) {
        Rational d = rat_abs(k.intervals()[idx].lo - *anchor);
        if (d < best_d) {
          best = idx;
          best_d = d;
        }
      }
    } else {
      Rational best_w = k.intervals()[best].lo - k.intervals()[best - 1].hi;
      for (std::size_t idx : candidates) {
        Rational w = k.intervals()[idx].lo - k.intervals()[idx - 1].hi;
        if (w > best_w) {
          best = idx;
          best_w = w;
        }
      }
    }
    if (auto choice = initial_window(k, family, best)) return choice;
  }
  // no usable gap: take a whole interval on the admissible side
  for (const auto& iv : k.intervals()) {
    if ((!floor_x || iv.lo > *floor_x) && iv.width() > 0)
      return WindowChoice{iv.lo, iv.width(), true};
  }
  return std::nullopt;
}

bool window_is_single_interval(const StageSet& k, const WindowChoice& w) {
  StageSet r = restrict(k, ClosedInterval{w.u, w.u + w.delta});
  return bounded_gaps(r).empty();
}

enum class EngineMode { closed_distance, implicit_phi, wedge_thirds };

// Certified upper bound on sup |g'(a)/g'(b) - 1| over the premise box: the
// pin ranges over the preliminary box, t over [t0, sqrt(5/4) t0] (distance
// engines) and z over the window slab.  Deterministic, so re-verification
// recomputes the identical value.
std::optional<Rational> premise_slope_deviation(const PhiSpec& base, EngineMode mode,
                                                const RationalPoint& x0c, const Rational& u1,
                                                const Rational& d1, const Rational& u2,
                                                const Rational& d2, unsigned bits) {
  const bool dist_like = base.kind != PhiSpec::Kind::dot;
  Rational rho0 = rat_min(rat_min(d1, d2),
                          dist_like ? rat_min(u1 - x0c.x, u2 - x0c.y)
                                    : rat_min(rat_abs(x0c.x), rat_abs(x0c.y))) /
                  4;
  if (rho0 <= 0) return std::nullopt;
  rho0 = dyadic_floor(rho0, kCoarseBits);
  Box2 S0{{x0c.x - rho0, x0c.x + rho0}, {x0c.y - rho0, x0c.y + rho0}};
  ClosedInterval z_range{u1, u1 + d1};

  if (mode == EngineMode::closed_distance || mode == EngineMode::wedge_thirds) {
    Rational t0_sq = dist_sq(x0c, {u1, u2});
    Enclosure t_range = hull(sqrt_enclose(exactly(t0_sq), bits),
                             sqrt_enclose(exactly(t0_sq * Rational(5, 4)), bits));
    Enclosure wz = sub(as_enclosure(z_range), as_enclosure(S0.x), bits);
    Enclosure rad = sub(pow_int(t_range, 2, bits), pow_int(wz, 2, bits), bits);
    if (!(rad.lo > 0) || !(wz.lo > 0)) return std::nullopt;
    Enclosure slope = div(wz, sqrt_enclose(rad, bits), bits);
    if (!(slope.lo > 0)) return std::nullopt;
    return slope.hi / slope.lo - 1;
  }
  Rational pad = base.kind == PhiSpec::Kind::dot ? d2 : rat_min(d2, (u2 - x0c.y) / 2);
  Box2 slab{z_range, {u2 - pad, u2 + d2 + pad}};
  auto verdict = certify_derivative_condition(base, S0, slab, bits);
  if (!verdict.certified) return std::nullopt;
  auto [p1, p2] = phi_partials_y(base, S0, slab, bits);
  Enclosure r = div(abs_enclose(p1), abs_enclose(p2), bits);
  if (!(r.lo > 0)) return std::nullopt;
  return r.hi / r.lo - 1;
}

// Scope of the emitted claim: "limit" only when both windows are aligned
// construction blocks of a middle family and the premise survives at limit
// scale (epsilon below the family's scale threshold).
std::string pin_scope(EngineMode mode, const std::string& set1_desc,
                      const std::string& set2_desc, const AxisWindow& w1, const AxisWindow& w2,
                      const Rational& eps) {
  auto window_aligned = [&](const std::string& desc, const ClosedInterval& window) {
    SetSpec sec;
    sec.kind = SetSpec::Kind::section;
    sec.base = std::make_shared<SetSpec>(parse_set_spec(desc));
    sec.window = window;
    return aligned_middle_family(sec);
  };
  auto fam1 = window_aligned(set1_desc, w1.window());
  auto fam2 = window_aligned(set2_desc, w2.window());
  bool aligned = fam1.has_value() && fam2.has_value();
  if (mode == EngineMode::wedge_thirds) return aligned ? "limit" : "stage";
  if (aligned && !w1.trivial && !w2.trivial &&
      eps < (1 + rat_min(fam1->ratio, fam2->ratio)) / 2)
    return "limit";
  return "stage";
}

// ---------------------------------------------------------------------------
// fact evaluation
// ---------------------------------------------------------------------------

// g(x, t, z) = x2 + sqrt(t^2 - (z - x1)^2), canonical quadrant (z > x1).
// Each fact is evaluated at the box corner that extremizes it; the needed
// monotonicities (g increasing in x1, x2, t on this quadrant) come from the
// closed form.
std::optional<std::vector<CheckRecord>> distance_checks(
    const Box2& S, const Rational& t_lo, const Rational& t_hi, const Rational& u1,
    const Rational& d1, const Rational& u2, const Rational& d2, bool wedge, unsigned bits) {
  std::vector<CheckRecord> checks;
  auto push = [&](const char* name, const Rational& lhs, const Rational& rhs) {
    checks.push_back({name, lhs, rhs});
    return lhs < rhs;
  };

  // domain: the radicand is worst at the far window edge with the small t
  Rational w_dom = (u1 + d1) - S.x.lo;
  Rational rad_dom = t_lo * t_lo - w_dom * w_dom;
  if (!push("radicand_min", Rational(0), rad_dom)) return std::nullopt;

  // F1: sup g(u1 + d1) < u2   (corner: x1 hi, x2 hi, t hi)
  Rational w1c = (u1 + d1) - S.x.hi;
  Enclosure g1 = add(exactly(S.y.hi),
                     sqrt_enclose(exactly(t_hi * t_hi - w1c * w1c), bits), bits);
  if (!push("curve_below_window", g1.hi, u2)) return std::nullopt;

  // F2: inf g(u1) > u2   (corner: x1 lo, x2 lo, t lo)
  Rational w2c = u1 - S.x.lo;
  Enclosure g2 = add(exactly(S.y.lo),
                     sqrt_enclose(exactly(t_lo * t_lo - w2c * w2c), bits), bits);
  if (!push("curve_enters_window", u2, g2.lo)) return std::nullopt;

  // F3: sup g(u1) < u2 + d2   (corner: x1 hi, x2 hi, t hi)
  Rational w3c = u1 - S.x.hi;
  Enclosure g3 = add(exactly(S.y.hi),
                     sqrt_enclose(exactly(t_hi * t_hi - w3c * w3c), bits), bits);
  if (!push("curve_stays_linked", g3.hi, u2 + d2)) return std::nullopt;

  if (wedge) {
    // W1: (z - x1) - (g - x2) > 0, worst at w min, t hi
    Rational w_min = u1 - S.x.hi;
    Enclosure r1 = sqrt_enclose(exactly(t_hi * t_hi - w_min * w_min), bits);
    if (!push("wedge_lower", r1.hi, w_min)) return std::nullopt;
    // W2: 3(g - x2) - (z - x1) > 0, worst at w max, t lo
    Enclosure r2 = sqrt_enclose(exactly(rat_max(rad_dom, Rational(0))), bits);
    if (!push("wedge_upper", w_dom, 3 * r2.lo)) return std::nullopt;
  }
  return checks;
}

// Implicit-route facts: every "g vs c" comparison becomes a certified sign of
// phi(x, (z, c)) - t, using that phi is increasing in y2 on the window slab.
std::optional<std::vector<CheckRecord>> implicit_checks(
    const PhiSpec& base, const Box2& S, const Rational& t_lo, const Rational& t_hi,
    const Rational& u1, const Rational& d1, const Rational& u2, const Rational& d2,
    const Rational& pad, unsigned bits) {
  std::vector<CheckRecord> checks;
  auto push = [&](const char* name, const Rational& lhs, const Rational& rhs) {
    checks.push_back({name, lhs, rhs});
    return lhs < rhs;
  };
  ClosedInterval z_range{u1, u1 + d1};

  Enclosure f1 = phi_value(base, S, point_box({u1 + d1, u2}), bits);
  if (!push("curve_below_window", t_hi, f1.lo)) return std::nullopt;

  Enclosure f2 = phi_value(base, S, point_box({u1, u2}), bits);
  if (!push("curve_enters_window", f2.hi, t_lo)) return std::nullopt;

  Enclosure f3 = phi_value(base, S, point_box({u1, u2 + d2}), bits);
  if (!push("curve_stays_linked", t_hi, f3.lo)) return std::nullopt;

  // bracketing: over the whole z-slab the curve stays inside the padded box
  Enclosure blo = phi_value(base, S, Box2{z_range, {u2 - pad, u2 - pad}}, bits);
  if (!push("bracket_low", blo.hi, t_lo)) return std::nullopt;
  Enclosure bhi = phi_value(base, S, Box2{z_range, {u2 + d2 + pad, u2 + d2 + pad}}, bits);
  if (!push("bracket_high", t_hi, bhi.lo)) return std::nullopt;

  return checks;
}

// ---------------------------------------------------------------------------
// generic engine
// ---------------------------------------------------------------------------

struct EngineInput {
  PhiSpec base;  // family with the implicit flag cleared
  EngineMode mode;
  StageSet k1;
  StageSet k2;
  RationalPoint x0;
  SearchBudget budget;
  std::optional<RationalPoint> anchor;
};

Rational tau_or_zero(const StageSet& s) {
  if (bounded_gaps(s).empty()) return 0;
  return thickness(s).tau;
}

// Thickness of the full middle-(ratio) construction; box restrictions can
// clip bridges and report less, but the certificate windows are re-aligned to
// whole construction blocks where this value is the exact one.
Rational family_tau(const MiddleFamily& fam) { return (1 - fam.ratio) / (2 * fam.ratio); }

Rational gate_tau(const StageSet& s) {
  if (!s.descriptor().empty()) {
    if (auto fam = base_middle_family(parse_set_spec(s.descriptor()))) return family_tau(*fam);
  }
  return tau_or_zero(s);
}

std::string engine_name(EngineMode mode) {
  switch (mode) {
    case EngineMode::closed_distance: return "dist";
    case EngineMode::implicit_phi: return "implicit";
    case EngineMode::wedge_thirds: return "middle-thirds";
  }
  return "?";
}

PinCertificate run_pin_engine(const EngineInput& in) {
  const unsigned bits = in.budget.prec.bits;
  const bool dist_like = in.base.kind != PhiSpec::Kind::dot;

  // --- upfront preconditions -------------------------------------------------
  if (in.mode == EngineMode::wedge_thirds) {
    for (const StageSet* s : {&in.k1, &in.k2}) {
      if (s->descriptor().empty() ||
          !is_middle_thirds_section(parse_set_spec(s->descriptor())))
        fail(ErrorCode::invalid_argument,
             "middle_thirds_pin_window: inputs must be middle-thirds sections");
    }
    // the whole K1 x K2 box must sit inside the open wedge of the pin
    ClosedInterval h1 = in.k1.hull(), h2 = in.k2.hull();
    for (const Rational& cx : {h1.lo, h1.hi}) {
      for (const Rational& cy : {h2.lo, h2.hi}) {
        Rational dx = cx - in.x0.x, dy = cy - in.x0.y;
        if (!(dy < dx && dx < 3 * dy))
          fail(ErrorCode::wedge_condition,
               "middle_thirds_pin_window: K1 x K2 not inside the pin's wedge");
      }
    }
  } else {
    Rational t1 = gate_tau(in.k1), t2 = gate_tau(in.k2);
    bool trivial_side = t1 == 0 || t2 == 0;
    if (!trivial_side && !(t1 * t2 > 1))
      fail(ErrorCode::thickness_product,
           "pin window: tau(K1)*tau(K2) = " + to_string(t1 * t2) + " is not > 1");
    if (in.base.kind == PhiSpec::Kind::dot && (in.x0.x == 0 || in.x0.y == 0))
      fail(ErrorCode::invalid_argument, "pin window: dot pins must avoid the axes");
  }

  // --- canonical frames ------------------------------------------------------
  AxisFrame f1, f2;
  if (in.base.kind == PhiSpec::Kind::dot) {
    f1 = {in.x0.x < 0, Rational(0)};
    f2 = {in.x0.y < 0, Rational(0)};
  } else if (in.mode != EngineMode::wedge_thirds) {
    auto pick_side = [&](const StageSet& k, const Rational& pin,
                         const std::optional<Rational>& anchor) -> bool {
      if (anchor) {
        if (*anchor == pin)
          fail(ErrorCode::invalid_argument, "pin window: anchor shares a pin coordinate");
        return *anchor > pin;  // window on the anchor's side
      }
      for (std::size_t i = 1; i < k.size(); ++i)
        if (k.intervals()[i].lo > pin) return true;
      return false;
    };
    bool right1 = pick_side(in.k1, in.x0.x,
                            in.anchor ? std::optional<Rational>(in.anchor->x) : std::nullopt);
    bool right2 = pick_side(in.k2, in.x0.y,
                            in.anchor ? std::optional<Rational>(in.anchor->y) : std::nullopt);
    f1 = {!right1, in.x0.x};
    f2 = {!right2, in.x0.y};
  }

  StageSet k1c = transform(in.k1, f1);
  StageSet k2c = transform(in.k2, f2);
  RationalPoint x0c{f1.map(in.x0.x), f2.map(in.x0.y)};
  std::optional<Rational> anchor1c, anchor2c;
  if (in.anchor) {
    anchor1c = f1.map(in.anchor->x);
    anchor2c = f2.map(in.anchor->y);
  }

  auto family_of = [](const StageSet& orig) -> std::optional<MiddleFamily> {
    if (orig.descriptor().empty()) return std::nullopt;
    return base_middle_family(parse_set_spec(orig.descriptor()));
  };
  std::optional<MiddleFamily> fam1 = transform(family_of(in.k1), f1);
  std::optional<MiddleFamily> fam2 = transform(family_of(in.k2), f2);

  // --- window selection ------------------------------------------------------
  // dist-like engines keep the pin strictly below both windows; the dot
  // engine has no such constraint (the curve is globally affine).
  std::optional<Rational> floor1, floor2;
  if (dist_like) {
    floor1 = x0c.x;
    floor2 = x0c.y;
  }
  std::optional<WindowChoice> w1, w2;
  if (in.mode == EngineMode::wedge_thirds) {
    // u = the lower-left corner of the section box
    Rational u1 = k1c.hull().lo, u2 = k2c.hull().lo;
    if (!fam1 || !fam2)
      fail(ErrorCode::invalid_argument, "middle_thirds_pin_window: missing construction family");
    auto b1 = aligned_block_at(*fam1, u1, k1c.hull().width());
    auto b2 = aligned_block_at(*fam2, u2, k2c.hull().width());
    if (!b1 || !b2)
      fail(ErrorCode::invalid_argument, "middle_thirds_pin_window: section not aligned");
    w1 = WindowChoice{u1, b1->width(), false};
    w2 = WindowChoice{u2, b2->width(), false};
  } else {
    w1 = select_window(k1c, fam1, floor1, anchor1c);
    w2 = select_window(k2c, fam2, floor2, anchor2c);
  }
  if (!w1 || !w2)
    fail(ErrorCode::budget_exhausted, "pin window: no admissible window on some axis");

  // --- premise: image-thickness product over the windows ----------------------
  Rational eps = 0, tau2 = 0, image_bound = 0;
  bool premise_done = false;
  for (unsigned round = 0; round <= in.budget.halvings && !premise_done; ++round) {
    bool trivial1 = w1->trivial || window_is_single_interval(k1c, *w1);
    bool trivial2 = w2->trivial || window_is_single_interval(k2c, *w2);
    w1->trivial = trivial1;
    w2->trivial = trivial2;
    if (in.mode == EngineMode::wedge_thirds) {
      premise_done = true;  // the wedge replaces the thickness-product premise
      break;
    }
    if (trivial1 || trivial2) {
      eps = 0;
      tau2 = 0;
      image_bound = 0;
      premise_done = true;
      break;
    }
    std::optional<Rational> dev = premise_slope_deviation(
        in.base, in.mode, x0c, w1->u, w1->delta, w2->u, w2->delta, bits);
    if (dev) {
      Rational candidate_eps = rat_max(*dev * Rational(9, 8), Rational(1, BigInt(1) << 40));
      if (candidate_eps < 1) {
        Rational ib = 0, t2v = 0;
        try {
          StageSet k1w = restrict(k1c, ClosedInterval{w1->u, w1->u + w1->delta});
          StageSet k2w = restrict(k2c, ClosedInterval{w2->u, w2->u + w2->delta});
          t2v = thickness(k2w).tau;
          ib = epsilon_thickness(k1w, candidate_eps).tau_eps * (1 - candidate_eps);
        } catch (const Error&) {
          ib = 0;
        }
        if (ib * t2v > 1) {
          eps = candidate_eps;
          tau2 = t2v;
          image_bound = ib;
          premise_done = true;
          break;
        }
      }
    }
    bool s1 = shrink_window(k1c, fam1, *w1);
    bool s2 = shrink_window(k2c, fam2, *w2);
    if (!s1 && !s2)
      fail(ErrorCode::budget_exhausted, "pin window: premise failed at the window floor");
  }
  if (!premise_done)
    fail(ErrorCode::budget_exhausted, "pin window: thickness-product premise not certified");

  const Rational u1 = w1->u, d1 = w1->delta;
  const Rational u2 = w2->u, d2 = w2->delta;

  // --- anchor target ----------------------------------------------------------
  Rational t0_sq = 0;
  Enclosure t0;
  if (in.mode == EngineMode::implicit_phi) {
    t0 = phi_value(in.base, point_box(x0c), point_box({u1, u2}), bits);
  } else {
    t0_sq = dist_sq(x0c, {u1, u2});
    t0 = sqrt_enclose(exactly(t0_sq), bits);
  }

  // --- t and S searches --------------------------------------------------------
  Rational pad = 0;
  if (in.mode == EngineMode::implicit_phi) {
    pad = rat_min(d2, (u2 - x0c.y) / 2);
    if (in.base.kind == PhiSpec::Kind::dot) pad = d2;
  }
  auto checker = [&](const Box2& S, const Rational& lo,
                     const Rational& hi) -> std::optional<std::vector<CheckRecord>> {
    if (in.mode == EngineMode::implicit_phi)
      return implicit_checks(in.base, S, lo, hi, u1, d1, u2, d2, pad, bits);
    return distance_checks(S, lo, hi, u1, d1, u2, d2,
                           in.mode == EngineMode::wedge_thirds, bits);
  };

  Rational cap;
  if (in.mode == EngineMode::implicit_phi) {
    cap = dyadic_ceil(t0.hi + rat_max(Rational(1), rat_abs(t0.hi)), kCoarseBits);
  } else {
    cap = dyadic_floor(sqrt_enclose(exactly(t0_sq * Rational(5, 4)), bits).lo, bits);
  }

  StageSet k1w = restrict(k1c, ClosedInterval{u1, u1 + d1});
  StageSet k2w = restrict(k2c, ClosedInterval{u2, u2 + d2});
  Rational maxw = rat_max(k1w.max_interval_width(), k2w.max_interval_width());
  if (maxw == 0) maxw = rat_min(d1, d2);
  Rational h_target = dyadic_ceil(maxw / 4, kCoarseBits);
  Rational h0 = dyadic_ceil(rat_min(d1, d2) / 8, kCoarseBits);

  Rational rho_max = rat_min(w1->delta, w2->delta);
  if (dist_like) {
    rho_max = rat_min(rho_max, rat_min(u1 - x0c.x, u2 - x0c.y));
  } else {
    rho_max = rat_min(rho_max, rat_min(rat_abs(x0c.x), rat_abs(x0c.y)));
  }
  Rational rho = dyadic_floor(rho_max / 4, kCoarseBits);

  std::optional<std::vector<CheckRecord>> final_checks;
  Rational t_lo, t_hi, rho_final;
  for (unsigned r = 0; r <= in.budget.halvings && rho > 0; ++r, rho /= 2) {
    Box2 S{{x0c.x - rho, x0c.x + rho}, {x0c.y - rho, x0c.y + rho}};
    // find the smallest certifiable t_lo above the anchor
    Rational h = h0;
    while (h > h_target) h /= 2;
    std::optional<Rational> found_lo;
    for (unsigned i = 0; i <= in.budget.halvings; ++i, h /= 2) {
      Rational cand = t0.hi + h;
      if (checker(S, cand, cand)) {
        found_lo = cand;
        break;
      }
    }
    if (!found_lo) continue;
    t_lo = *found_lo;
    // grow t_hi toward the cap, then refine upward
    t_hi = t_lo;
    Rational step = t_lo - t0.hi;
    for (unsigned d = 0; d < in.budget.doublings && t_hi < cap; ++d) {
      Rational cand = rat_min(cap, t_hi + step);
      if (cand <= t_hi) break;
      if (checker(S, t_lo, cand)) {
        t_hi = cand;
        step *= 2;
      } else {
        break;
      }
    }
    for (int fine = 0; fine < 8; ++fine) {
      step /= 2;
      Rational cand = rat_min(cap, t_hi + step);
      if (cand > t_hi && checker(S, t_lo, cand)) t_hi = cand;
    }
    if (t_hi <= t_lo) continue;
    final_checks = checker(S, t_lo, t_hi);
    if (final_checks) {
      rho_final = rho;
      break;
    }
  }
  if (!final_checks)
    fail(ErrorCode::budget_exhausted, "pin window: no certifiable (S, T) within budget");

  // --- derivative condition for the implicit engine ---------------------------
  if (in.mode == EngineMode::implicit_phi) {
    Box2 S{{x0c.x - rho_final, x0c.x + rho_final}, {x0c.y - rho_final, x0c.y + rho_final}};
    Box2 slab{{u1, u1 + d1}, {u2 - pad, u2 + d2 + pad}};
    auto verdict = certify_derivative_condition(in.base, S, slab, bits);
    if (!verdict.certified)
      fail(ErrorCode::derivative_condition,
           "phi_pin_window: derivative condition fails on the certified boxes");
  }

  // --- assemble the certificate (back in original coordinates) ----------------
  PinCertificate cert;
  cert.phi = in.base;
  cert.phi.implicit = in.mode == EngineMode::implicit_phi;
  cert.engine = engine_name(in.mode);
  cert.set1_desc = descriptor_or_explicit(in.k1);
  cert.set2_desc = descriptor_or_explicit(in.k2);
  cert.depth = std::max(native_depth(parse_set_spec(cert.set1_desc)),
                        native_depth(parse_set_spec(cert.set2_desc)));
  cert.pin = in.x0;
  cert.pin_radius = rho_final;
  cert.t_window = {t_lo, t_hi};
  cert.w1 = AxisWindow{f1.map(u1), d1, !f1.reflect, w1->trivial};
  cert.w2 = AxisWindow{f2.map(u2), d2, !f2.reflect, w2->trivial};
  cert.t0_sq = t0_sq;
  cert.t0 = t0;
  cert.epsilon_used = eps;
  cert.tau2_tilde = tau2;
  cert.image_bound = image_bound;
  cert.wedge = in.mode == EngineMode::wedge_thirds;
  cert.checks = std::move(*final_checks);

  cert.scope = pin_scope(in.mode, cert.set1_desc, cert.set2_desc, cert.w1, cert.w2, eps);

  // executable witness for the wedge engine: run the gap-sequence descent at
  // the center parameters
  if (in.mode == EngineMode::wedge_thirds) {
    Rational t_mid = dyadic_floor((t_lo + t_hi) / 2, bits);
    DistanceCurveMap g(x0c, t_mid * t_mid);
    SetSpec sec1;
    sec1.kind = SetSpec::Kind::section;
    sec1.base = std::make_shared<SetSpec>(parse_set_spec(cert.set1_desc));
    sec1.window = ClosedInterval{u1, u1 + d1};
    SetSpec sec2 = sec1;
    sec2.base = std::make_shared<SetSpec>(parse_set_spec(cert.set2_desc));
    sec2.window = ClosedInterval{u2, u2 + d2};
    Rational tol = rat_max(maxw / 4, Rational(1, BigInt(1) << 80));
    IntersectionWitness witness =
        gap_sequence_intersect_image(build(sec1), build(sec2), g, tol, in.budget.prec);
    cert.witness_point = witness.point;
  }
  return cert;
}

}  // namespace

// ---------------------------------------------------------------------------
// public engines
// ---------------------------------------------------------------------------

PinCertificate distance_pin_window(const StageSet& k1, const StageSet& k2,
                                   const RationalPoint& x0, const SearchBudget& budget,
                                   const std::optional<RationalPoint>& anchor) {
  return run_pin_engine({PhiSpec::dist(), EngineMode::closed_distance, k1, k2, x0, budget,
                         anchor});
}

PinCertificate phi_pin_window(const PhiSpec& phi, const StageSet& k1, const StageSet& k2,
                              const RationalPoint& x0, const SearchBudget& budget,
                              const std::optional<RationalPoint>& anchor) {
  PhiSpec base = phi;
  base.implicit = false;
  return run_pin_engine({base, EngineMode::implicit_phi, k1, k2, x0, budget, anchor});
}

PinCertificate middle_thirds_pin_window(const StageSet& k1, const StageSet& k2,
                                        const RationalPoint& x0, const SearchBudget& budget) {
  return run_pin_engine(
      {PhiSpec::dist(), EngineMode::wedge_thirds, k1, k2, x0, budget, std::nullopt});
}

DotPinCertificate dot_pin_window(const StageSet& k1, const StageSet& k2,
                                 const RationalPoint& x0, const Rational& delta) {
  if (x0.x == 0 || x0.y == 0)
    fail(ErrorCode::invalid_argument, "dot_pin_window: pin must avoid the axes");
  if (delta < 0) fail(ErrorCode::invalid_argument, "dot_pin_window: delta must be >= 0");
  if (!(delta < rat_min(rat_abs(x0.x), rat_abs(x0.y)) / 3))
    fail(ErrorCode::invalid_argument,
         "dot_pin_window: delta must stay below min(|x1|,|x2|)/3");

  Rational t1 = tau_or_zero(k1), t2 = tau_or_zero(k2);
  bool trivial_side = t1 == 0 || t2 == 0;
  Rational product = trivial_side ? Rational(0) : t1 * t2;
  if (!trivial_side && product < 1)
    fail(ErrorCode::thickness_product,
         "dot_pin_window: tau(K1)*tau(K2) = " + to_string(product) + " < 1");

  ClosedInterval h1 = k1.hull(), h2 = k2.hull();
  // hull of v*K: rational interval arithmetic
  auto scaled_hull = [](const Rational& v, const ClosedInterval& h) {
    Rational a = v * h.lo, b = v * h.hi;
    return a <= b ? ClosedInterval{a, b} : ClosedInterval{b, a};
  };
  // the t-window that links (t - x1*K1) with x2*K2, for one pin
  auto window_at = [&](const Rational& x1, const Rational& x2) -> ClosedInterval {
    ClosedInterval s1 = scaled_hull(x1, h1);
    ClosedInterval s2 = scaled_hull(x2, h2);
    Rational lower = rat_max(s1.lo + s2.hi, s1.hi + s2.lo);
    Rational upper = s1.hi + s2.hi;
    return {lower, upper};
  };

  // intersect over the box: the bounds are piecewise-affine in x, so corners
  // suffice exactly
  std::optional<ClosedInterval> t_window;
  for (const Rational& cx : {Rational(x0.x - delta), Rational(x0.x + delta)}) {
    for (const Rational& cy : {Rational(x0.y - delta), Rational(x0.y + delta)}) {
      ClosedInterval w = window_at(cx, cy);
      if (!t_window) {
        t_window = w;
      } else {
        t_window->lo = rat_max(t_window->lo, w.lo);
        t_window->hi = rat_min(t_window->hi, w.hi);
      }
    }
  }
  if (!(t_window->lo < t_window->hi))
    fail(ErrorCode::invalid_argument, "dot_pin_window: empty t-window (delta too large)");

  DotPinCertificate cert;
  cert.pin = x0;
  cert.delta = delta;
  cert.set1_desc = descriptor_or_explicit(k1);
  cert.set2_desc = descriptor_or_explicit(k2);
  cert.depth = std::max(native_depth(parse_set_spec(cert.set1_desc)),
                        native_depth(parse_set_spec(cert.set2_desc)));
  cert.t_window = *t_window;
  cert.hull_a1 = scaled_hull(x0.x, h1).lo;
  cert.hull_a2 = scaled_hull(x0.y, h2).lo;
  cert.hull_l1 = h1.width();
  cert.hull_l2 = h2.width();
  cert.tau_product = product;

  if (cert.hull_l1 == cert.hull_l2) {
    // the lemma's displayed window, with |x1| >= |x2| after ordering
    Rational ax = rat_abs(x0.x), ay = rat_abs(x0.y);
    Rational big = rat_max(ax, ay), small = rat_min(ax, ay);
    Rational l = cert.hull_l1;
    Rational base = cert.hull_a1 + cert.hull_a2 + l * big;
    cert.paper_window = ClosedInterval{base + l * delta, base + l * small - 2 * l * delta};
  }

  auto fam1 = aligned_middle_family(parse_set_spec(cert.set1_desc));
  auto fam2 = aligned_middle_family(parse_set_spec(cert.set2_desc));
  cert.scope = fam1 && fam2 && !trivial_side ? "limit" : "stage";
  return cert;
}

// ---------------------------------------------------------------------------
// re-verification (witness-consistency half of `verify`)
// ---------------------------------------------------------------------------

namespace {

void check_or_fail(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::verify_failed, "certificate re-verification failed: " + what);
}

}  // namespace

void reverify_pin_certificate(const PinCertificate& cert) {
  const unsigned bits = default_precision().bits;
  check_or_fail(cert.pin_radius > 0, "pin box degenerate");
  check_or_fail(cert.t_window.lo < cert.t_window.hi, "t-window degenerate");

  // rebuild the canonical frames from the stored window orientations
  AxisFrame f1{!cert.w1.window_right, cert.phi.kind == PhiSpec::Kind::dot ? 0 : cert.pin.x};
  AxisFrame f2{!cert.w2.window_right, cert.phi.kind == PhiSpec::Kind::dot ? 0 : cert.pin.y};
  StageSet k1 = build(parse_set_spec(cert.set1_desc));
  StageSet k2 = build(parse_set_spec(cert.set2_desc));
  StageSet k1c = transform(k1, f1);
  StageSet k2c = transform(k2, f2);
  RationalPoint x0c{f1.map(cert.pin.x), f2.map(cert.pin.y)};
  Rational u1 = f1.map(cert.w1.u), u2 = f2.map(cert.w2.u);
  Rational d1 = cert.w1.delta, d2 = cert.w2.delta;

  // windows anchored at stage endpoints of the right sets
  check_or_fail(k1c.contains(u1) && k1c.contains(u1 + d1), "window 1 endpoints not in K1");
  check_or_fail(k2c.contains(u2) && k2c.contains(u2 + d2), "window 2 endpoints not in K2");
  StageSet k1w = restrict(k1c, ClosedInterval{u1, u1 + d1});
  StageSet k2w = restrict(k2c, ClosedInterval{u2, u2 + d2});
  check_or_fail(bounded_gaps(k1w).empty() == cert.w1.trivial, "window 1 trivial flag");
  check_or_fail(bounded_gaps(k2w).empty() == cert.w2.trivial, "window 2 trivial flag");

  // anchor target
  if (cert.engine == "implicit") {
    Enclosure t0 = phi_value(cert.phi, point_box(x0c), point_box({u1, u2}), bits);
    check_or_fail(t0.lo <= cert.t0.hi && cert.t0.lo <= t0.hi, "anchor target enclosure");
  } else {
    check_or_fail(cert.t0_sq == dist_sq(x0c, {u1, u2}), "anchor target t0^2");
  }
  check_or_fail(cert.t0.lo <= cert.t0.hi, "anchor enclosure");
  check_or_fail(cert.t_window.lo > cert.t0.lo, "t-window must sit above the anchor");

  // premise
  if (cert.wedge) {
    for (const StageSet* s : {&k1, &k2})
      check_or_fail(is_middle_thirds_section(parse_set_spec(s->descriptor())),
                    "wedge engine needs middle-thirds sections");
    for (const Rational& cx : {k1.hull().lo, k1.hull().hi})
      for (const Rational& cy : {k2.hull().lo, k2.hull().hi}) {
        Rational dx = cx - cert.pin.x, dy = cy - cert.pin.y;
        check_or_fail(dy < dx && dx < 3 * dy, "wedge containment");
      }
  } else if (!cert.w1.trivial && !cert.w2.trivial) {
    check_or_fail(cert.epsilon_used > 0 && cert.epsilon_used < 1, "epsilon range");
    check_or_fail(thickness(k2w).tau == cert.tau2_tilde, "tau2 mismatch");
    Rational ib = epsilon_thickness(k1w, cert.epsilon_used).tau_eps * (1 - cert.epsilon_used);
    check_or_fail(ib == cert.image_bound, "image bound mismatch");
    check_or_fail(cert.tau2_tilde * cert.image_bound > 1, "thickness product premise");
    EngineMode mode = cert.engine == "implicit" ? EngineMode::implicit_phi
                                                : EngineMode::closed_distance;
    auto dev = premise_slope_deviation(cert.phi, mode, x0c, u1, d1, u2, d2, bits);
    check_or_fail(dev.has_value() && *dev < cert.epsilon_used,
                  "slope deviation not certified below epsilon");
  }

  // fact table: recompute deterministically and compare bit-for-bit
  Box2 S{{x0c.x - cert.pin_radius, x0c.x + cert.pin_radius},
         {x0c.y - cert.pin_radius, x0c.y + cert.pin_radius}};
  std::optional<std::vector<CheckRecord>> recomputed;
  if (cert.engine == "implicit") {
    Rational pad = rat_min(d2, (u2 - x0c.y) / 2);
    if (cert.phi.kind == PhiSpec::Kind::dot) pad = d2;
    recomputed = implicit_checks(cert.phi, S, cert.t_window.lo, cert.t_window.hi, u1, d1, u2,
                                 d2, pad, bits);
  } else {
    recomputed =
        distance_checks(S, cert.t_window.lo, cert.t_window.hi, u1, d1, u2, d2, cert.wedge, bits);
  }
  check_or_fail(recomputed.has_value(), "fact certification no longer holds");
  check_or_fail(recomputed->size() == cert.checks.size(), "fact table size");
  for (std::size_t i = 0; i < cert.checks.size(); ++i) {
    check_or_fail((*recomputed)[i].name == cert.checks[i].name, "fact name mismatch");
    check_or_fail((*recomputed)[i].lhs == cert.checks[i].lhs &&
                      (*recomputed)[i].rhs == cert.checks[i].rhs,
                  "fact bounds mismatch at " + cert.checks[i].name);
    check_or_fail(cert.checks[i].lhs < cert.checks[i].rhs,
                  "fact inequality violated at " + cert.checks[i].name);
  }

  EngineMode mode = cert.wedge ? EngineMode::wedge_thirds
                               : (cert.engine == "implicit" ? EngineMode::implicit_phi
                                                            : EngineMode::closed_distance);
  check_or_fail(cert.engine == engine_name(mode), "engine tag mismatch");
  check_or_fail(pin_scope(mode, cert.set1_desc, cert.set2_desc, cert.w1, cert.w2,
                          cert.epsilon_used) == cert.scope,
                "scope mismatch");
}

void reverify_dot_certificate(const DotPinCertificate& cert) {
  StageSet k1 = build(parse_set_spec(cert.set1_desc));
  StageSet k2 = build(parse_set_spec(cert.set2_desc));
  DotPinCertificate fresh = dot_pin_window(k1, k2, cert.pin, cert.delta);
  check_or_fail(fresh.t_window == cert.t_window, "dot t-window mismatch");
  check_or_fail(fresh.hull_a1 == cert.hull_a1 && fresh.hull_a2 == cert.hull_a2,
                "dot hull offsets mismatch");
  check_or_fail(fresh.hull_l1 == cert.hull_l1 && fresh.hull_l2 == cert.hull_l2,
                "dot hull lengths mismatch");
  check_or_fail(fresh.tau_product == cert.tau_product, "dot thickness product mismatch");
  check_or_fail(fresh.paper_window.has_value() == cert.paper_window.has_value() &&
                    (!fresh.paper_window || (*fresh.paper_window == *cert.paper_window)),
                "dot lemma window mismatch");
  check_or_fail(fresh.scope == cert.scope, "dot scope mismatch");
}

}  // namespace taucert
