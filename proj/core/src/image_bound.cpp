#include "taucert/image_bound.hpp"

#include <algorithm>

#include "taucert/errors.hpp"

namespace taucert {

std::optional<Rational> ratio_deviation_upper(const MonotoneMap& map,
                                              const ClosedInterval& window, unsigned bits) {
  Enclosure d = abs_enclose(map.derivative_box(as_enclosure(window), bits));
  if (!(d.lo > 0)) return std::nullopt;
  // sup |g'(a)/g'(b) - 1| <= hi/lo - 1 over the window
  return d.hi / d.lo - 1;
}

Rational image_thickness_lower_bound(const StageSet& set, const ClosedInterval& window,
                                     const MonotoneMap& map, const Rational& epsilon,
                                     unsigned bits) {
  if (!(epsilon > 0 && epsilon < 1))
    fail(ErrorCode::invalid_argument, "image bound needs epsilon in (0,1)");
  auto dev = ratio_deviation_upper(map, window, bits);
  if (!dev)
    fail(ErrorCode::derivative_condition,
         "image bound: |g'| not certified away from zero on the window");
  if (!(*dev < epsilon))
    fail(ErrorCode::derivative_condition,
         "image bound: ratio deviation " + to_string(*dev) +
             " not certified below epsilon " + to_string(epsilon));
  StageSet restricted = restrict(set, window);
  Rational tau_eps = epsilon_thickness(restricted, epsilon).tau_eps;
  return tau_eps * (1 - epsilon);
}

StageSet map_stage_inner(const StageSet& set, const MonotoneMap& map, Precision prec) {
  for (Precision p = prec; !p.exhausted(); p = p.next()) {
    std::vector<ClosedInterval> out;
    out.reserve(set.size());
    bool ok = true;
    for (const auto& iv : set.intervals()) {
      if (iv.lo == iv.hi && !map.exact()) continue;  // a point we cannot name; omitting keeps the approximation inner
      Enclosure a = map.value(iv.lo, p.bits);
      Enclosure b = map.value(iv.hi, p.bits);
      if (!map.increasing()) std::swap(a, b);
      if (a.hi > b.lo) {
        ok = false;
        break;
      }
      out.push_back({a.hi, b.lo});
    }
    if (!ok) continue;
    if (!map.increasing()) std::reverse(out.begin(), out.end());
    return StageSet(std::move(out));
  }
  fail(ErrorCode::precision_exhausted,
       "map_stage_inner: intervals stay ambiguous at the precision cap");
}

}  // namespace taucert
