#pragma once

#include <stdexcept>
#include <string>

namespace taucert {

/// Stable failure classes.  The CLI maps each class to a distinct exit code,
/// so the numeric values are part of the external interface and must not be
/// reordered.
enum class ErrorCode : int {
  ok = 0,
  verify_failed = 3,  // oracle coverage or witness-consistency failure
  parse_error = 10,
  thickness_undefined = 11,
  invalid_argument = 12,
  not_linked = 13,
  thickness_product = 14,
  derivative_condition = 15,
  budget_exhausted = 16,
  precision_exhausted = 17,
  wedge_condition = 18,
  skeleton_invalid = 19,
  tree_invalid = 20,
  bracket_missing = 21,
  schema_mismatch = 22,
  depth_refusal = 23,
  io_error = 24,
  cap_exceeded = 25,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace taucert
