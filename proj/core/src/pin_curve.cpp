#include "taucert/pin_curve.hpp"

#include <deque>
#include <sstream>

#include "taucert/errors.hpp"

namespace taucert {

PinCurve PinCurve::distance(const RationalPoint& pin, const Rational& t_sq, int branch) {
  if (t_sq <= 0) fail(ErrorCode::invalid_argument, "distance curve needs t^2 > 0");
  if (branch != 1 && branch != -1) fail(ErrorCode::invalid_argument, "branch must be +-1");
  PinCurve c;
  c.phi = PhiSpec::dist();
  c.pin = pin;
  c.t_sq = t_sq;
  c.branch = branch;
  return c;
}

PinCurve PinCurve::dot_product(const RationalPoint& pin, const Rational& t) {
  if (pin.y == 0) fail(ErrorCode::invalid_argument, "dot curve needs x2 != 0");
  PinCurve c;
  c.phi = PhiSpec::dot();
  c.pin = pin;
  c.t = t;
  return c;
}

Enclosure eval_pin_curve(const PinCurve& curve, const Rational& z, unsigned bits) {
  switch (curve.phi.kind) {
    case PhiSpec::Kind::euclidean: {
      Rational d = z - curve.pin.x;
      Rational rad = curve.t_sq - d * d;
      if (rad <= 0)
        fail(ErrorCode::invalid_argument,
             "pin curve: z outside the domain (radicand <= 0)");
      Enclosure root = sqrt_enclose(exactly(rad), bits);
      if (curve.branch < 0) root = neg(root);
      return add(exactly(curve.pin.y), root, bits);
    }
    case PhiSpec::Kind::dot: {
      // exact affine value
      Rational v = curve.t / curve.pin.y - (curve.pin.x / curve.pin.y) * z;
      return exactly(v);
    }
    case PhiSpec::Kind::pnorm:
      break;
  }
  fail(ErrorCode::invalid_argument, "eval_pin_curve: no closed form for this phi");
}

Enclosure distance_radicand_box(const Box2& S, const Enclosure& t_range,
                                const Enclosure& z_range, unsigned bits) {
  Enclosure d = sub(z_range, as_enclosure(S.x), bits);
  return sub(pow_int(t_range, 2, bits), pow_int(d, 2, bits), bits);
}

Enclosure eval_pin_curve_box(const PinCurve& curve, const Box2& S, const Enclosure& t_range,
                             const Enclosure& z_range, unsigned bits) {
  switch (curve.phi.kind) {
    case PhiSpec::Kind::euclidean: {
      Enclosure rad = distance_radicand_box(S, t_range, z_range, bits);
      if (rad.lo <= 0)
        fail(ErrorCode::invalid_argument,
             "pin curve box: radicand not certified positive");
      Enclosure root = sqrt_enclose(rad, bits);
      if (curve.branch < 0) root = neg(root);
      return add(as_enclosure(S.y), root, bits);
    }
    case PhiSpec::Kind::dot: {
      Enclosure x1 = as_enclosure(S.x), x2 = as_enclosure(S.y);
      if (x2.contains(Rational(0)))
        fail(ErrorCode::invalid_argument, "dot curve box: x2 range crosses 0");
      return sub(div(t_range, x2, bits), mul(div(x1, x2, bits), z_range, bits), bits);
    }
    case PhiSpec::Kind::pnorm:
      break;
  }
  fail(ErrorCode::invalid_argument, "eval_pin_curve_box: no closed form for this phi");
}

namespace {

// Outcome of probing F(y) = phi(pin, (z, y)) - t at one ordinate: a certified
// sign, an exact zero, or "the root lies within tol/2 of y" (the enclosures
// overlap even though they are far tighter than the derivative-scaled
// tolerance, so the true values coincide to that scale).
struct ProbeResult {
  enum Kind { sign, exact_zero, close } kind;
  int s = 0;
};

}  // namespace

Enclosure solve_implicit_pin_curve(const PhiSpec& phi, const RationalPoint& pin,
                                   const Enclosure& t, const Rational& z,
                                   const ClosedInterval& bracket, const Rational& tol,
                                   Precision prec) {
  if (tol <= 0) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  if (bracket.lo >= bracket.hi) fail(ErrorCode::bracket_missing, "empty bracket");

  // The implicit function theorem hypothesis: d phi / d y2 bounded away from
  // zero over the bracket slab around the seed column.
  Box2 slab{{z, z}, bracket};
  auto m2_opt = certify_partial2_lower(phi, point_box(pin), slab, prec.bits);
  if (!m2_opt)
    fail(ErrorCode::derivative_condition,
         "solve_implicit_pin_curve: d phi / d y2 not certified away from zero on the bracket");
  const Rational m2 = *m2_opt;  // |dF/dy| >= m2 > 0 on the slab

  auto probe = [&](const Rational& y) -> ProbeResult {
    if (t.is_point()) {
      if (auto s = exact_sign_phi_minus_t(phi, pin, {z, y}, t.lo)) {
        if (*s == 0) return {ProbeResult::exact_zero, 0};
        return {ProbeResult::sign, *s};
      }
    }
    for (Precision p = prec;; p = p.next()) {
      Enclosure v = phi_value(phi, point_box(pin), point_box({z, y}), p.bits);
      if (v.lo > t.hi) return {ProbeResult::sign, 1};
      if (v.hi < t.lo) return {ProbeResult::sign, -1};
      // |F(y)| <= widths, so |y - root| <= widths / m2.
      if ((v.width() + t.width()) / m2 <= tol / 2) return {ProbeResult::close, 0};
      if (p.next().exhausted())
        fail(ErrorCode::precision_exhausted,
             "solve_implicit_pin_curve: sign undecidable at precision cap");
    }
  };

  auto close_interval = [&](const Rational& y) {
    return enclose(rat_max(bracket.lo, y - tol / 2), rat_min(bracket.hi, y + tol / 2));
  };

  ProbeResult r_lo = probe(bracket.lo);
  if (r_lo.kind == ProbeResult::exact_zero) return exactly(bracket.lo);
  if (r_lo.kind == ProbeResult::close) return close_interval(bracket.lo);
  ProbeResult r_hi = probe(bracket.hi);
  if (r_hi.kind == ProbeResult::exact_zero) return exactly(bracket.hi);
  if (r_hi.kind == ProbeResult::close) return close_interval(bracket.hi);
  if (r_lo.s == r_hi.s)
    fail(ErrorCode::bracket_missing,
         "solve_implicit_pin_curve: no sign change over the bracket");

  Rational lo = bracket.lo, hi = bracket.hi;
  while (hi - lo > tol) {
    Rational mid = dyadic_floor((lo + hi) / 2, prec.bits);
    if (mid <= lo || mid >= hi) break;  // dyadic grid exhausted at this width
    ProbeResult r = probe(mid);
    if (r.kind == ProbeResult::exact_zero) return exactly(mid);
    if (r.kind == ProbeResult::close) return close_interval(mid);
    if (r.s == r_lo.s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return enclose(lo, hi);
}

AffineMap::AffineMap(const Rational& scale, const Rational& shift)
    : scale_(scale), shift_(shift) {
  if (scale == 0) fail(ErrorCode::invalid_argument, "affine map needs nonzero scale");
}

Enclosure AffineMap::value(const Rational& z, unsigned) const {
  return exactly(scale_ * z + shift_);
}

Enclosure AffineMap::value_box(const Enclosure& z, unsigned bits) const {
  return add(mul(exactly(scale_), z, bits), exactly(shift_), bits);
}

Enclosure AffineMap::derivative_box(const Enclosure&, unsigned) const {
  return exactly(scale_);
}

std::string AffineMap::describe() const {
  std::ostringstream os;
  os << "affine(" << to_string(scale_) << "z+" << to_string(shift_) << ")";
  return os.str();
}

DistanceCurveMap::DistanceCurveMap(const RationalPoint& pin, const Rational& t_sq, int branch,
                                   bool right_of_pin)
    : curve_(PinCurve::distance(pin, t_sq, branch)), right_of_pin_(right_of_pin) {}

Enclosure DistanceCurveMap::value(const Rational& z, unsigned bits) const {
  return eval_pin_curve(curve_, z, bits);
}

Enclosure DistanceCurveMap::value_box(const Enclosure& z, unsigned bits) const {
  Enclosure d = sub(z, exactly(curve_.pin.x), bits);
  Enclosure rad = sub(exactly(curve_.t_sq), pow_int(d, 2, bits), bits);
  if (rad.lo <= 0)
    fail(ErrorCode::invalid_argument, "distance curve: domain not certified over the box");
  Enclosure root = sqrt_enclose(rad, bits);
  if (curve_.branch < 0) root = neg(root);
  return add(exactly(curve_.pin.y), root, bits);
}

Enclosure DistanceCurveMap::derivative_box(const Enclosure& z, unsigned bits) const {
  // g'(z) = -branch * (z - x1) / sqrt(t^2 - (z - x1)^2)
  Enclosure d = sub(z, exactly(curve_.pin.x), bits);
  Enclosure rad = sub(exactly(curve_.t_sq), pow_int(d, 2, bits), bits);
  if (rad.lo <= 0)
    fail(ErrorCode::invalid_argument, "distance curve derivative: domain not certified");
  Enclosure quot = div(d, sqrt_enclose(rad, bits), bits);
  return curve_.branch > 0 ? neg(quot) : quot;
}

bool DistanceCurveMap::increasing() const {
  // On z > x1 the +branch is decreasing; every reflection flips once.
  bool decreasing = (curve_.branch > 0) == right_of_pin_;
  return !decreasing;
}

std::string DistanceCurveMap::describe() const {
  std::ostringstream os;
  os << "g_dist(pin=(" << to_string(curve_.pin.x) << "," << to_string(curve_.pin.y)
     << "),t2=" << to_string(curve_.t_sq) << ",branch=" << curve_.branch << ")";
  return os.str();
}

DerivativeRangeResult certify_abs_derivative_range(const MonotoneMap& map,
                                                   const ClosedInterval& domain,
                                                   const Rational& lo, const Rational& hi,
                                                   unsigned max_pieces, unsigned bits) {
  DerivativeRangeResult result;
  std::deque<ClosedInterval> queue{domain};
  unsigned pieces = 1;
  bool have_hull = false;
  while (!queue.empty()) {
    ClosedInterval piece = queue.front();
    queue.pop_front();
    Enclosure d = abs_enclose(map.derivative_box(as_enclosure(piece), bits));
    if (d.lo > lo && d.hi < hi) {
      result.abs_derivative = have_hull ? hull(result.abs_derivative, d) : d;
      have_hull = true;
      continue;
    }
    if (pieces >= max_pieces || piece.width() == 0) return result;  // not certified
    Rational mid = piece.mid();
    queue.push_back({piece.lo, mid});
    queue.push_back({mid, piece.hi});
    ++pieces;
  }
  result.certified = true;
  return result;
}

}  // namespace taucert
