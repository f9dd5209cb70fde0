#pragma once

#include <optional>
#include <string>
#include <utility>

#include "taucert/enclosure.hpp"
#include "taucert/stage_set.hpp"

namespace taucert {

/// Closed planar box with rational corners.
struct Box2 {
  ClosedInterval x;
  ClosedInterval y;

  bool contains(const RationalPoint& p) const { return x.contains(p.x) && y.contains(p.y); }
};

inline Enclosure as_enclosure(const ClosedInterval& iv) { return {iv.lo, iv.hi}; }
inline Box2 point_box(const RationalPoint& p) { return {{p.x, p.x}, {p.y, p.y}}; }

std::optional<Box2> intersect(const Box2& a, const Box2& b);
std::string to_string(const Box2& b);

/// Parses "[a,b]x[c,d]".
Box2 parse_box(const std::string& text);

/// A configuration function phi(x, y) on R^2 x R^2.  The implicit kind wraps
/// one of the closed-form families but forces every consumer through the
/// implicit-function machinery (bisection, sign tests) instead of the closed
/// forms; the two routes cross-check each other.
struct PhiSpec {
  enum class Kind { euclidean, dot, pnorm };

  Kind kind = Kind::euclidean;
  Rational p = 2;        // pnorm exponent, p >= 1
  bool implicit = false; // route through the implicit engine

  std::optional<Box2> domain_a;
  std::optional<Box2> domain_b;

  static PhiSpec dist() { return PhiSpec{Kind::euclidean, 2, false, {}, {}}; }
  static PhiSpec dot() { return PhiSpec{Kind::dot, 2, false, {}, {}}; }
  static PhiSpec pnorm(const Rational& p) { return PhiSpec{Kind::pnorm, p, false, {}, {}}; }
  PhiSpec as_implicit() const {
    PhiSpec s = *this;
    s.implicit = true;
    return s;
  }
};

/// Grammar: dist | dot | pnorm:<p> | implicit:<dist|dot|pnorm:<p>>.
PhiSpec parse_phi_spec(const std::string& text);
std::string render(const PhiSpec& spec);

/// Enclosure of { phi(x, y) : x in X, y in Y }.
Enclosure phi_value(const PhiSpec& spec, const Box2& X, const Box2& Y, unsigned bits);

/// Fast double evaluation for the brute-force oracle.
double phi_value_double(const PhiSpec& spec, double x1, double x2, double y1, double y2);

/// Enclosures of (d phi / d y1, d phi / d y2) over X x Y.
std::pair<Enclosure, Enclosure> phi_partials_y(const PhiSpec& spec, const Box2& X,
                                               const Box2& Y, unsigned bits);

/// Exact sign of phi(x, y) - t when the family admits a rational predicate
/// (dot always; euclidean via squares; pnorm with integer exponent).
std::optional<int> exact_sign_phi_minus_t(const PhiSpec& spec, const RationalPoint& x,
                                          const RationalPoint& y, const Rational& t);

/// Certified upper bound on sup |grad_y phi|_2 over X x Y (the Lipschitz
/// constant used in the stage-resolution formula).
Rational lipschitz_upper(const PhiSpec& spec, const Box2& X, const Box2& Y, unsigned bits);

/// Verdict of the derivative condition: either positive lower bounds m1, m2 on
/// |d phi / d y_i| over boxA x boxB, or a located failure witness.
struct DerivativeVerdict {
  bool certified = false;
  Rational m1;
  Rational m2;
  std::optional<Box2> witness_a;  // sub-box of boxA where certification fails
  std::optional<Box2> witness_b;  // sub-box of boxB where certification fails
};

DerivativeVerdict certify_derivative_condition(const PhiSpec& spec, const Box2& boxA,
                                               const Box2& boxB, unsigned bits);

/// Lower bound on |d phi / d y2| alone over boxA x boxB (what the implicit
/// solver needs for monotonicity in y2), or nullopt when it cannot be
/// certified positive.
std::optional<Rational> certify_partial2_lower(const PhiSpec& spec, const Box2& boxA,
                                               const Box2& boxB, unsigned bits);

}  // namespace taucert
