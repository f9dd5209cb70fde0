#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taucert/rational.hpp"

namespace taucert {

struct ClosedInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool operator==(const ClosedInterval& o) const { return lo == o.lo && hi == o.hi; }
};

std::optional<ClosedInterval> intersect(const ClosedInterval& a, const ClosedInterval& b);

/// Finite-stage surrogate for a Cantor set: an ordered union of disjoint
/// closed intervals with exact rational endpoints.  `descriptor` records how
/// the set was constructed (set-spec mini-grammar, see set_spec.hpp) and is
/// empty for ad-hoc sets.
class StageSet {
 public:
  StageSet(std::vector<ClosedInterval> intervals, std::string descriptor = "");

  const std::vector<ClosedInterval>& intervals() const { return intervals_; }
  const std::string& descriptor() const { return descriptor_; }
  void set_descriptor(std::string d) { descriptor_ = std::move(d); }

  std::size_t size() const { return intervals_.size(); }
  ClosedInterval hull() const { return {intervals_.front().lo, intervals_.back().hi}; }

  bool contains(const Rational& v) const;

  /// Widest interval width (0 for a set of isolated points).
  Rational max_interval_width() const;

  /// All interval endpoints in increasing order (duplicates for degenerate
  /// intervals are collapsed).
  std::vector<Rational> endpoints() const;

 private:
  std::vector<ClosedInterval> intervals_;
  std::string descriptor_;
};

/// A connected component of the complement.  Unbounded components keep only
/// their finite endpoint.
struct Gap {
  std::optional<Rational> left;   // absent for the left ray
  std::optional<Rational> right;  // absent for the right ray

  bool bounded() const { return left.has_value() && right.has_value(); }
  Rational width() const { return *right - *left; }  // bounded gaps only
};

/// depth-th stage of the middle-`ratio` construction on `hull`:
/// 2^depth intervals, each stage removing the open middle `ratio` proportion.
StageSet build_middle_set(const Rational& ratio, const ClosedInterval& hull, unsigned depth);

/// The two unbounded gaps plus all bounded gaps, left to right.
std::vector<Gap> gaps(const StageSet& set);

/// Bounded gaps only, left to right.
std::vector<Gap> bounded_gaps(const StageSet& set);

/// Exact affine image: scale * K + shift.  Order is restored when scale < 0.
StageSet affine_image(const StageSet& set, const Rational& scale, const Rational& shift);

/// K intersected with a closed window; errors when the intersection is empty.
StageSet restrict(const StageSet& set, const ClosedInterval& window);

/// Largest endpoint e of `set` with e <= v (nullopt when v is below the set).
std::optional<Rational> snap_down_to_endpoint(const StageSet& set, const Rational& v);

/// Smallest endpoint e of `set` with e >= v.
std::optional<Rational> snap_up_to_endpoint(const StageSet& set, const Rational& v);

}  // namespace taucert
