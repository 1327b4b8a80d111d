#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlgt {

enum class ErrorCode {
  kInvalidJson,
  kSchema,
  kSelfLoop,
  kIsolatedNode,
  kDuplicateEdge,
  kIndexOutOfRange,
  kNotBijection,
  kSizeLimit,
  kUnknownPair,
  kMemoryLimit,
  kIterationLimit,
  kVariantSpaceMismatch,
  kSpaceMismatch,
  kNonSymmetric,
  kNoConvergence,
  kShapeMismatch,
  kDigitOverflow,
  kBaseMismatch,
  kInvalidArgument,
  kFileNotFound,
};

/// Stable machine-readable name, e.g. "ISOLATED_NODE".
std::string_view error_code_name(ErrorCode code);

/// True for errors caused by exceeding a configured resource bound.
bool is_resource_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wlgt
