#pragma once

#include <cstddef>
#include <vector>

#include "taucert/stage_set.hpp"

namespace taucert {

enum class GapSide { left, right };

/// Identifies one endpoint of one bounded gap.
struct GapEndpoint {
  std::size_t gap_index;  // index into bounded_gaps(set)
  GapSide side;           // which endpoint of that gap
};

/// bridge(set, endpoint, epsilon): interval from the endpoint to the nearest
/// gap on the outward side that is wide enough to terminate it.  epsilon = 0
/// is the classical bridge (terminator width >= |G|); epsilon in (0,1) uses
/// the strict epsilon-rule (terminator width > (1-epsilon)|G|).  The hull-end
/// unbounded gap always terminates.
ClosedInterval bridge(const StageSet& set, const GapEndpoint& endpoint, const Rational& epsilon);

/// Convenience overload: locates `u` among the bounded-gap endpoints.  When a
/// degenerate interval makes `u` an endpoint of two gaps, the right-endpoint
/// reading wins.
ClosedInterval bridge(const StageSet& set, const Rational& u, const Rational& epsilon);

struct ThicknessEntry {
  GapEndpoint endpoint;
  Rational u;             // the endpoint's coordinate
  Rational gap_width;     // |G|
  Rational bridge_width;  // |B(u)|
  Rational ratio;         // tau(K, u) = |B(u)| / |G|
};

/// Per-endpoint bridge/gap ratios plus their minimum.  Every bounded gap
/// contributes exactly two entries (left and right endpoint).
struct ThicknessReport {
  std::vector<ThicknessEntry> entries;
  Rational tau;
  ThicknessEntry argmin;
};

struct EpsilonThicknessReport {
  Rational epsilon;
  std::vector<ThicknessEntry> entries;
  Rational tau_eps;
  ThicknessEntry argmin;
};

/// Exact thickness over all bounded-gap endpoints.  Errors with
/// ErrorCode::thickness_undefined when the set has no bounded gap.
ThicknessReport thickness(const StageSet& set);

EpsilonThicknessReport epsilon_thickness(const StageSet& set, const Rational& epsilon);

/// Largest threshold such that tau_eps(set) = tau(set) for every
/// epsilon below it (finite-stage form of the convergence proposition).
Rational epsilon_floor(const StageSet& set);

/// dim_H(K) >= log 2 / log(2 + 1/tau).
double hausdorff_lower_bound(double tau);

}  // namespace taucert
