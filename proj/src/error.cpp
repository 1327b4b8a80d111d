#include "wlgt/error.hpp"

namespace wlgt {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidJson: return "INVALID_JSON";
    case ErrorCode::kSchema: return "SCHEMA";
    case ErrorCode::kSelfLoop: return "SELF_LOOP";
    case ErrorCode::kIsolatedNode: return "ISOLATED_NODE";
    case ErrorCode::kDuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::kIndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::kNotBijection: return "NOT_BIJECTION";
    case ErrorCode::kSizeLimit: return "SIZE_LIMIT";
    case ErrorCode::kUnknownPair: return "UNKNOWN_PAIR";
    case ErrorCode::kMemoryLimit: return "MEMORY_LIMIT";
    case ErrorCode::kIterationLimit: return "ITERATION_LIMIT";
    case ErrorCode::kVariantSpaceMismatch: return "VARIANT_SPACE_MISMATCH";
    case ErrorCode::kSpaceMismatch: return "SPACE_MISMATCH";
    case ErrorCode::kNonSymmetric: return "NON_SYMMETRIC";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kDigitOverflow: return "DIGIT_OVERFLOW";
    case ErrorCode::kBaseMismatch: return "BASE_MISMATCH";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kFileNotFound: return "FILE_NOT_FOUND";
  }
  return "UNKNOWN";
}

bool is_resource_error(ErrorCode code) {
  return code == ErrorCode::kMemoryLimit || code == ErrorCode::kSizeLimit ||
         code == ErrorCode::kIterationLimit;
}

}  // namespace wlgt
