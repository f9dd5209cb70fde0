#pragma once

#include <vector>

#include "taucert/pin_curve.hpp"
#include "taucert/thickness.hpp"

namespace taucert {

enum class LinkReason { disjoint, containment, linked };

/// Verdict of the linkedness test: hulls overlap partially, with neither
/// containing the other.
struct LinkedVerdict {
  bool linked = false;
  ClosedInterval left_hull;   // the hull starting further left
  ClosedInterval right_hull;  // the other one
  LinkReason reason = LinkReason::disjoint;
};

LinkedVerdict linked(const ClosedInterval& a, const ClosedInterval& b);
LinkedVerdict linked(const StageSet& a, const StageSet& b);

/// One step of the gap-sequence refinement: the pair of linked gaps tracked in
/// A and B.  Exactly one side changes between consecutive entries, strictly
/// shrinking.
struct TracePair {
  ClosedInterval gap_a;
  ClosedInterval gap_b;
};

enum class WitnessQuality {
  exact,                // the point is a member of both sets, exactly
  certified_enclosure,  // true membership certified; the reported rational
                        // approximates the common point to enclosure width
  within_tol,           // membership on one side holds to distance <= tol
};

struct IntersectionWitness {
  Rational point;
  ClosedInterval shared;  // the shared closed region the descent landed in
  std::vector<TracePair> trace;
  WitnessQuality quality = WitnessQuality::exact;
};

/// Constructive special case of the Newhouse gap lemma: linked stage sets with
/// tau(A) * tau(B) >= 1 (checked exactly; a set with no bounded gap passes
/// vacuously) always share a point, located by the alternating gap descent.
IntersectionWitness gap_lemma_intersect(const StageSet& a, const StageSet& b,
                                        const Rational& tol);

/// The nonlinear variant for sections of the middle-thirds construction:
/// K2 and g(K1) intersect whenever they are linked and g is certified
/// monotone with 1 < |g'| < 3 on hull(K1).  The descent alternates between
/// exact gaps of K2 and enclosed images of gaps of K1.
IntersectionWitness gap_sequence_intersect_image(const StageSet& k1, const StageSet& k2,
                                                 const MonotoneMap& g, const Rational& tol,
                                                 Precision prec = default_precision());

/// Budget for the derivative certification inside the image variant.
inline constexpr unsigned kDerivativeSubdivisionBudget = 1u << 14;

}  // namespace taucert
