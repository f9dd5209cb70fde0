#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "taucert/stage_set.hpp"

namespace taucert {

/// Parsed form of the set-spec mini-grammar:
///   middle:<ratio>@[<a>,<b>]#<depth>
///   explicit:{[a1,b1],...}
///   section:<base-spec>/<interval>
/// Rationals are written p/q (the /q is omitted when q = 1).
struct SetSpec {
  enum class Kind { middle, explicit_list, section };

  Kind kind;

  // middle
  Rational ratio;
  ClosedInterval hull{Rational(0), Rational(1)};
  unsigned depth = 0;

  // explicit_list
  std::vector<ClosedInterval> intervals;

  // section
  std::shared_ptr<SetSpec> base;
  ClosedInterval window{Rational(0), Rational(1)};
};

/// Throws ErrorCode::parse_error with the offending position on bad input.
SetSpec parse_set_spec(const std::string& text);

/// Canonical rendering; parse(render(s)) == render(s) as strings.
std::string render(const SetSpec& spec);

/// Builds the stage set, stamping its descriptor with the canonical render.
StageSet build(const SetSpec& spec);

/// Rebuilds with every middle-construction depth replaced by `depth`
/// (sections keep their windows).  Errors for explicit specs whose
/// geometry cannot be re-staged.
StageSet build_at_depth(const SetSpec& spec, unsigned depth);

/// Deepest middle-construction depth mentioned in the spec (0 for explicit).
unsigned native_depth(const SetSpec& spec);

/// The middle-construction parameters behind a spec, if the spec is a middle
/// set or a tower of construction-aligned sections over one.  Used to decide
/// when a certificate may be scoped to the limit set rather than the stage.
struct MiddleFamily {
  Rational ratio;
  ClosedInterval base_hull;
};
std::optional<MiddleFamily> aligned_middle_family(const SetSpec& spec);

/// The underlying middle construction, ignoring window alignment (what the
/// window-snapping logic needs for sets restricted to arbitrary boxes).
std::optional<MiddleFamily> base_middle_family(const SetSpec& spec);

/// Largest construction interval of the family with left endpoint `left` and
/// width <= max_width, walking down from the hull.  nullopt when `left` is
/// not a construction left endpoint reachable within `max_level` levels.
std::optional<ClosedInterval> aligned_block_at(const MiddleFamily& family,
                                               const Rational& left,
                                               const Rational& max_width,
                                               unsigned max_level = 64);

/// Largest construction interval of width <= max_width containing `point`
/// (which must belong to the construction at every level of the descent).
std::optional<ClosedInterval> aligned_block_containing(const MiddleFamily& family,
                                                       const Rational& point,
                                                       const Rational& max_width,
                                                       unsigned max_level = 64);

/// True when the spec denotes a section of the standard middle-thirds
/// construction (the hypothesis of the gap-sequence image lemma).
bool is_middle_thirds_section(const SetSpec& spec);

/// True when `window` is a construction interval of the middle-(ratio)
/// construction on `hull`, at any level up to `max_level`.
bool is_construction_interval(const Rational& ratio, const ClosedInterval& hull,
                              const ClosedInterval& window, unsigned max_level = 64);

/// The set's descriptor, or its explicit rendering when it was built ad hoc.
std::string descriptor_or_explicit(const StageSet& set);

}  // namespace taucert
