#include "taucert/stage_set.hpp"

#include <algorithm>

#include "taucert/errors.hpp"

namespace taucert {

std::optional<ClosedInterval> intersect(const ClosedInterval& a, const ClosedInterval& b) {
  Rational lo = rat_max(a.lo, b.lo);
  Rational hi = rat_min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return ClosedInterval{lo, hi};
}

StageSet::StageSet(std::vector<ClosedInterval> intervals, std::string descriptor)
    : intervals_(std::move(intervals)), descriptor_(std::move(descriptor)) {
  if (intervals_.empty()) fail(ErrorCode::invalid_argument, "StageSet needs at least one interval");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].lo > intervals_[i].hi)
      fail(ErrorCode::invalid_argument, "StageSet interval with lo > hi");
    if (i > 0 && !(intervals_[i - 1].hi < intervals_[i].lo))
      fail(ErrorCode::invalid_argument, "StageSet intervals must be strictly sorted and disjoint");
  }
}

bool StageSet::contains(const Rational& v) const {
  // Binary search on the sorted interval list.
  std::size_t lo = 0, hi = intervals_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (intervals_[mid].hi < v) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < intervals_.size() && intervals_[lo].contains(v);
}

Rational StageSet::max_interval_width() const {
  Rational w = 0;
  for (const auto& iv : intervals_) w = rat_max(w, iv.width());
  return w;
}

std::vector<Rational> StageSet::endpoints() const {
  std::vector<Rational> out;
  out.reserve(2 * intervals_.size());
  for (const auto& iv : intervals_) {
    out.push_back(iv.lo);
    if (iv.hi != iv.lo) out.push_back(iv.hi);
  }
  return out;
}

StageSet build_middle_set(const Rational& ratio, const ClosedInterval& hull, unsigned depth) {
  if (!(ratio > 0 && ratio < 1))
    fail(ErrorCode::invalid_argument, "middle ratio must lie in (0,1)");
  if (!(hull.lo < hull.hi)) fail(ErrorCode::invalid_argument, "degenerate hull");
  std::vector<ClosedInterval> cur{hull};
  Rational keep = (1 - ratio) / 2;  // width fraction kept on each side
  for (unsigned d = 0; d < depth; ++d) {
    std::vector<ClosedInterval> next;
    next.reserve(cur.size() * 2);
    for (const auto& iv : cur) {
      Rational side = iv.width() * keep;
      next.push_back({iv.lo, iv.lo + side});
      next.push_back({iv.hi - side, iv.hi});
    }
    cur = std::move(next);
  }
  return StageSet(std::move(cur));
}

std::vector<Gap> gaps(const StageSet& set) {
  std::vector<Gap> out;
  const auto& ivs = set.intervals();
  out.push_back(Gap{std::nullopt, ivs.front().lo});
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i)
    out.push_back(Gap{ivs[i].hi, ivs[i + 1].lo});
  out.push_back(Gap{ivs.back().hi, std::nullopt});
  return out;
}

std::vector<Gap> bounded_gaps(const StageSet& set) {
  std::vector<Gap> out;
  const auto& ivs = set.intervals();
  out.reserve(ivs.size());
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i)
    out.push_back(Gap{ivs[i].hi, ivs[i + 1].lo});
  return out;
}

StageSet affine_image(const StageSet& set, const Rational& scale, const Rational& shift) {
  if (scale == 0) fail(ErrorCode::invalid_argument, "affine_image scale must be nonzero");
  std::vector<ClosedInterval> out;
  out.reserve(set.size());
  for (const auto& iv : set.intervals()) {
    Rational a = scale * iv.lo + shift;
    Rational b = scale * iv.hi + shift;
    if (scale > 0) {
      out.push_back({a, b});
    } else {
      out.push_back({b, a});
    }
  }
  if (scale < 0) std::reverse(out.begin(), out.end());
  return StageSet(std::move(out));
}

StageSet restrict(const StageSet& set, const ClosedInterval& window) {
  if (window.lo > window.hi) fail(ErrorCode::invalid_argument, "invalid window");
  std::vector<ClosedInterval> out;
  for (const auto& iv : set.intervals()) {
    if (auto clipped = intersect(iv, window)) out.push_back(*clipped);
  }
  if (out.empty())
    fail(ErrorCode::invalid_argument, "restrict: window does not intersect the set");
  return StageSet(std::move(out));
}

std::optional<Rational> snap_down_to_endpoint(const StageSet& set, const Rational& v) {
  std::optional<Rational> best;
  for (const auto& iv : set.intervals()) {
    if (iv.lo <= v) best = iv.lo;
    if (iv.hi <= v) best = iv.hi;
    if (iv.lo > v) break;
  }
  return best;
}

std::optional<Rational> snap_up_to_endpoint(const StageSet& set, const Rational& v) {
  for (const auto& iv : set.intervals()) {
    if (iv.lo >= v) return iv.lo;
    if (iv.hi >= v) return iv.hi;
  }
  return std::nullopt;
}

}  // namespace taucert
