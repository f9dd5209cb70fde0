#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taucert/image_bound.hpp"
#include "taucert/newhouse.hpp"

namespace taucert {

/// Search budget for the window constructions.
struct SearchBudget {
  unsigned halvings = 64;
  unsigned doublings = 64;
  Precision prec = default_precision();
};

/// One axis of a certificate window: the anchor gap endpoint u and the width
/// delta, extending toward the set ([u, u+delta] or [u-delta, u]).
struct AxisWindow {
  Rational u;
  Rational delta;
  bool window_right = true;
  bool trivial = false;  // the restricted window is a single stage interval

  ClosedInterval window() const {
    return window_right ? ClosedInterval{u, u + delta} : ClosedInterval{u - delta, u};
  }
};

/// A certified strict inequality lhs < rhs, with outward-rounded dyadic
/// bounds.  Re-verification recomputes these deterministically.
struct CheckRecord {
  std::string name;
  Rational lhs;
  Rational rhs;
};

/// Witness that T is contained in every pinned phi-distance set with pin in
/// S: T ⊂ ∩_{x∈S} Δ_{phi,x}(K̃1 × K̃2).
struct PinCertificate {
  PhiSpec phi;
  std::string engine;  // "dist" | "dot" | "implicit" | "middle-thirds"
  std::string set1_desc;
  std::string set2_desc;
  unsigned depth = 0;
  std::string scope;  // "stage" | "limit"

  RationalPoint pin;        // x0
  Rational pin_radius;      // S = pin + [-r, r]^2
  ClosedInterval t_window;  // T, dyadic endpoints

  AxisWindow w1;
  AxisWindow w2;

  Rational t0_sq;       // exact squared anchor target (distance engines)
  Enclosure t0;         // enclosure of the anchor target
  Rational epsilon_used;  // 0 for trivial windows
  Rational tau2_tilde;    // tau(K̃2); 0 when trivial
  Rational image_bound;   // certified lower bound on tau(g(K̃1)); 0 when trivial

  bool wedge = false;            // middle-thirds engine
  Rational witness_point = 0;    // gap-sequence witness at the center parameters

  std::vector<CheckRecord> checks;

  Box2 pin_box() const {
    return {{pin.x - pin_radius, pin.x + pin_radius}, {pin.y - pin_radius, pin.y + pin_radius}};
  }
  ClosedInterval window1() const { return w1.window(); }
  ClosedInterval window2() const { return w2.window(); }
};

/// Dot-product pin window: the whole construction is exact hull arithmetic.
struct DotPinCertificate {
  RationalPoint pin;  // x0
  Rational delta;     // Q = pin + [-delta, delta]^2
  std::string set1_desc;
  std::string set2_desc;
  unsigned depth = 0;
  std::string scope;

  ClosedInterval t_window;  // exact rational endpoints
  Rational hull_a1, hull_a2;  // min of x0_j * K_j (the lemma's a_j, at the center pin)
  Rational hull_l1, hull_l2;  // hull lengths of K_1, K_2
  Rational tau_product;       // exact tau(K1) * tau(K2); 0 when a side is an interval

  /// The lemma's displayed window, recorded when l1 == l2.
  std::optional<ClosedInterval> paper_window;

  Box2 pin_box() const {
    return {{pin.x - delta, pin.x + delta}, {pin.y - delta, pin.y + delta}};
  }
};

/// Pin wiggling for dot products: every t in the window is realized as x·y
/// for every pin x in the delta-box, by linking t - x1*K1 with x2*K2.
DotPinCertificate dot_pin_window(const StageSet& k1, const StageSet& k2,
                                 const RationalPoint& x0, const Rational& delta);

/// Pin wiggling for Euclidean distances via the closed-form curve.  `anchor`
/// steers the gap-endpoint selection toward a target point (used by the tree
/// mechanism); without it the widest admissible gap is taken.
PinCertificate distance_pin_window(const StageSet& k1, const StageSet& k2,
                                   const RationalPoint& x0, const SearchBudget& budget = {},
                                   const std::optional<RationalPoint>& anchor = std::nullopt);

/// Pin wiggling through the implicit-function route; works for every phi
/// family (dist, dot, pnorm) and never touches the closed forms.
PinCertificate phi_pin_window(const PhiSpec& phi, const StageSet& k1, const StageSet& k2,
                              const RationalPoint& x0, const SearchBudget& budget = {},
                              const std::optional<RationalPoint>& anchor = std::nullopt);

/// Pin wiggling for sections of the middle-thirds construction (tau = 1): the
/// wedge condition replaces the thickness-product premise, and the
/// gap-sequence engine provides the executable intersection witness.
PinCertificate middle_thirds_pin_window(const StageSet& k1, const StageSet& k2,
                                        const RationalPoint& x0,
                                        const SearchBudget& budget = {});

/// Re-derives every check record of `cert` from its primary fields and
/// re-certifies each inequality; any corrupted field changes some recomputed
/// value.  Errors with ErrorCode::verify_failed on mismatch.
void reverify_pin_certificate(const PinCertificate& cert);
void reverify_dot_certificate(const DotPinCertificate& cert);

}  // namespace taucert
