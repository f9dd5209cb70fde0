#pragma once

#include <memory>

#include "taucert/phi.hpp"

namespace taucert {

/// The level curve { y : phi(x, y) = t } solved for y2 as a function of
/// z = y1.  Closed forms exist for the euclidean and dot families:
///   distance: g(z) = x2 + branch * sqrt(t^2 - (z - x1)^2)   (t^2 kept exact)
///   dot:      g(z) = t/x2 - (x1/x2) z                        (exact affine)
struct PinCurve {
  PhiSpec phi;
  RationalPoint pin;
  Rational t;     // dot target
  Rational t_sq;  // distance target squared; t = sqrt(t_sq) > 0
  int branch = 1; // distance: sign of the square-root branch

  static PinCurve distance(const RationalPoint& pin, const Rational& t_sq, int branch = 1);
  static PinCurve dot_product(const RationalPoint& pin, const Rational& t);
};

/// Enclosure of g(z).  Errors when z leaves the curve's domain (the radicand
/// enclosure touches <= 0) or, for dot, when the pin sits on the x-axis.
Enclosure eval_pin_curve(const PinCurve& curve, const Rational& z, unsigned bits);

/// Box version for certification: pin ranges over S, t over t_range, z over
/// z_range; the result encloses every g_{x,t}(z) in that box.
Enclosure eval_pin_curve_box(const PinCurve& curve, const Box2& S, const Enclosure& t_range,
                             const Enclosure& z_range, unsigned bits);

/// Enclosure of the distance-curve radicand t^2 - (z-x1)^2 over the same box.
Enclosure distance_radicand_box(const Box2& S, const Enclosure& t_range,
                                const Enclosure& z_range, unsigned bits);

/// Certified root of F(y2) = phi(x, (z, y2)) - t inside `bracket`, found by
/// bisection with outward rounding; the bracket must show a certified sign
/// change.  Exact sign predicates are used whenever the family admits them,
/// otherwise enclosures with precision escalation.
Enclosure solve_implicit_pin_curve(const PhiSpec& phi, const RationalPoint& pin,
                                   const Enclosure& t, const Rational& z,
                                   const ClosedInterval& bracket, const Rational& tol,
                                   Precision prec = default_precision());

/// A certified monotone map of the line, the `g` of the gap-sequence and
/// image-thickness lemmas.
class MonotoneMap {
 public:
  virtual ~MonotoneMap() = default;

  virtual Enclosure value(const Rational& z, unsigned bits) const = 0;
  virtual Enclosure value_box(const Enclosure& z, unsigned bits) const = 0;
  virtual Enclosure derivative_box(const Enclosure& z, unsigned bits) const = 0;
  virtual bool increasing() const = 0;

  /// Rational-exact evaluation (affine maps); value() is then a point.
  virtual bool exact() const { return false; }

  virtual std::string describe() const = 0;
};

/// z -> scale * z + shift, exact.
class AffineMap final : public MonotoneMap {
 public:
  AffineMap(const Rational& scale, const Rational& shift);

  Enclosure value(const Rational& z, unsigned bits) const override;
  Enclosure value_box(const Enclosure& z, unsigned bits) const override;
  Enclosure derivative_box(const Enclosure& z, unsigned bits) const override;
  bool increasing() const override { return scale_ > 0; }
  bool exact() const override { return true; }
  std::string describe() const override;

  const Rational& scale() const { return scale_; }
  const Rational& shift() const { return shift_; }

 private:
  Rational scale_;
  Rational shift_;
};

/// The distance pin curve restricted to one side of the pin, where it is
/// monotone.  Requires the domain to stay strictly inside the radicand's
/// positivity region.
class DistanceCurveMap final : public MonotoneMap {
 public:
  DistanceCurveMap(const RationalPoint& pin, const Rational& t_sq, int branch = 1,
                   bool right_of_pin = true);

  Enclosure value(const Rational& z, unsigned bits) const override;
  Enclosure value_box(const Enclosure& z, unsigned bits) const override;
  Enclosure derivative_box(const Enclosure& z, unsigned bits) const override;
  bool increasing() const override;
  std::string describe() const override;

  const PinCurve& curve() const { return curve_; }

 private:
  PinCurve curve_;
  bool right_of_pin_;
};

/// Subdivides `domain` until |g'| is certified to lie inside (lo, hi) on each
/// piece, or the subdivision budget is exhausted.  Returns the certified hull
/// of the |g'| enclosures on success.
struct DerivativeRangeResult {
  bool certified = false;
  Enclosure abs_derivative;  // hull over all certified pieces
};
DerivativeRangeResult certify_abs_derivative_range(const MonotoneMap& map,
                                                   const ClosedInterval& domain,
                                                   const Rational& lo, const Rational& hi,
                                                   unsigned max_pieces, unsigned bits);

}  // namespace taucert
