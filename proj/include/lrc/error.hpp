#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrc {

enum class ErrorCode {
  kParamMismatch,
  kShapeMismatch,
  kZeroInverse,
  kRankDeficient,
  kInconsistent,
  kFieldTooSmall,
  kTooManyErasures,
  kInvalidParams,
  kNotOptimalConfiguration,
  kGroupOverwhelmed,
  kTooLarge,
  kConditionsNotMet,
  kFormat,
  kIo,
  kInternal,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lrc
