#include "taucert/errors.hpp"

namespace taucert {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::verify_failed: return "verify-failed";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::thickness_undefined: return "thickness-undefined";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::not_linked: return "not-linked";
    case ErrorCode::thickness_product: return "thickness-product";
    case ErrorCode::derivative_condition: return "derivative-condition";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::precision_exhausted: return "precision-exhausted";
    case ErrorCode::wedge_condition: return "wedge-condition";
    case ErrorCode::skeleton_invalid: return "skeleton-invalid";
    case ErrorCode::tree_invalid: return "tree-invalid";
    case ErrorCode::bracket_missing: return "bracket-missing";
    case ErrorCode::schema_mismatch: return "schema-mismatch";
    case ErrorCode::depth_refusal: return "depth-refusal";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
  }
  return "unknown";
}

}  // namespace taucert
