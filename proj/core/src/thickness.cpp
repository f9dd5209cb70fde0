#include "taucert/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "taucert/errors.hpp"

namespace taucert {

namespace {

bool qualifies(const Rational& candidate_width, const Rational& gap_width,
               const Rational& epsilon) {
  if (epsilon == 0) return candidate_width >= gap_width;
  return candidate_width > (1 - epsilon) * gap_width;
}

}  // namespace

ClosedInterval bridge(const StageSet& set, const GapEndpoint& endpoint,
                      const Rational& epsilon) {
  if (epsilon < 0 || epsilon >= 1)
    fail(ErrorCode::invalid_argument, "bridge epsilon must lie in [0,1)");
  auto bgs = bounded_gaps(set);
  if (endpoint.gap_index >= bgs.size())
    fail(ErrorCode::invalid_argument, "bridge: not a gap endpoint of this set");
  const Gap& g = bgs[endpoint.gap_index];
  Rational gw = g.width();
  if (endpoint.side == GapSide::right) {
    // Scan rightward for the nearest qualifying gap; the right ray always
    // qualifies, terminating the bridge at the hull endpoint.
    Rational u = *g.right;
    for (std::size_t j = endpoint.gap_index + 1; j < bgs.size(); ++j) {
      if (qualifies(bgs[j].width(), gw, epsilon)) return {u, *bgs[j].left};
    }
    return {u, set.hull().hi};
  }
  Rational u = *g.left;
  for (std::size_t j = endpoint.gap_index; j-- > 0;) {
    if (qualifies(bgs[j].width(), gw, epsilon)) return {*bgs[j].right, u};
  }
  return {set.hull().lo, u};
}

ClosedInterval bridge(const StageSet& set, const Rational& u, const Rational& epsilon) {
  auto bgs = bounded_gaps(set);
  for (std::size_t i = 0; i < bgs.size(); ++i) {
    if (*bgs[i].right == u) return bridge(set, GapEndpoint{i, GapSide::right}, epsilon);
  }
  for (std::size_t i = 0; i < bgs.size(); ++i) {
    if (*bgs[i].left == u) return bridge(set, GapEndpoint{i, GapSide::left}, epsilon);
  }
  fail(ErrorCode::invalid_argument, "bridge: " + to_string(u) + " is not a bounded-gap endpoint");
}

namespace {

template <typename Report>
void scan_endpoints(const StageSet& set, const Rational& epsilon, Report& report) {
  auto bgs = bounded_gaps(set);
  if (bgs.empty())
    fail(ErrorCode::thickness_undefined,
         "thickness undefined: set has no bounded gap");
  report.entries.reserve(2 * bgs.size());
  for (std::size_t i = 0; i < bgs.size(); ++i) {
    for (GapSide side : {GapSide::left, GapSide::right}) {
      GapEndpoint ep{i, side};
      ClosedInterval b = bridge(set, ep, epsilon);
      ThicknessEntry entry;
      entry.endpoint = ep;
      entry.u = side == GapSide::left ? *bgs[i].left : *bgs[i].right;
      entry.gap_width = bgs[i].width();
      entry.bridge_width = b.width();
      entry.ratio = entry.bridge_width / entry.gap_width;
      report.entries.push_back(std::move(entry));
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < report.entries.size(); ++k) {
    if (report.entries[k].ratio < report.entries[best].ratio) best = k;
  }
  report.argmin = report.entries[best];
}

}  // namespace

ThicknessReport thickness(const StageSet& set) {
  ThicknessReport report;
  scan_endpoints(set, Rational(0), report);
  report.tau = report.argmin.ratio;
  return report;
}

EpsilonThicknessReport epsilon_thickness(const StageSet& set, const Rational& epsilon) {
  if (!(epsilon > 0 && epsilon < 1))
    fail(ErrorCode::invalid_argument, "epsilon_thickness needs epsilon in (0,1)");
  EpsilonThicknessReport report;
  report.epsilon = epsilon;
  scan_endpoints(set, epsilon, report);
  report.tau_eps = report.argmin.ratio;
  return report;
}

Rational epsilon_floor(const StageSet& set) {
  auto bgs = bounded_gaps(set);
  std::set<Rational> widths;
  for (const auto& g : bgs) widths.insert(g.width());
  // The epsilon-bridge can only differ from the classical one when a strictly
  // narrower gap starts to qualify, i.e. when epsilon >= 1 - |H|/|G| for some
  // width pair |H| < |G|.  The closest such pair gives the threshold.
  Rational best = Rational(1, 2);
  bool found = false;
  for (auto it = widths.begin(); it != widths.end(); ++it) {
    auto next = std::next(it);
    if (next == widths.end()) break;
    Rational candidate = 1 - *it / *next;
    if (!found || candidate < best) best = candidate;
    found = true;
  }
  return best;
}

double hausdorff_lower_bound(double tau) {
  if (!(tau > 0)) fail(ErrorCode::invalid_argument, "hausdorff_lower_bound needs tau > 0");
  return std::log(2.0) / std::log(2.0 + 1.0 / tau);
}

}  // namespace taucert
