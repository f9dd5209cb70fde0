#pragma once

#include "taucert/pin_curve.hpp"
#include "taucert/thickness.hpp"

namespace taucert {

/// Certified upper bound on sup |g'(a)/g'(b) - 1| over a window, computed from
/// the enclosure of |g'|.  nullopt when |g'| is not certified away from zero.
std::optional<Rational> ratio_deviation_upper(const MonotoneMap& map,
                                              const ClosedInterval& window, unsigned bits);

/// tau_eps(K restricted to window) * (1 - eps): a certified lower bound on the
/// thickness of g(K ∩ window), valid once the ratio deviation of g' over the
/// window is certified below eps.  Errors when that certification fails or
/// when the restricted set has no bounded gap (thickness undefined).
Rational image_thickness_lower_bound(const StageSet& set, const ClosedInterval& window,
                                     const MonotoneMap& map, const Rational& epsilon,
                                     unsigned bits);

/// Inner approximation of the image stage: every mapped interval is shrunk to
/// its certainly-covered core [hi(g(a)), lo(g(b))].  Escalates precision until
/// all cores are nonempty.  Used to compute the image thickness directly.
StageSet map_stage_inner(const StageSet& set, const MonotoneMap& map,
                         Precision prec = default_precision());

}  // namespace taucert
