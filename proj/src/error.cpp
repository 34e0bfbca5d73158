#include "lrc/error.hpp"

namespace lrc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kTooManyErasures: return "TooManyErasures";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNotOptimalConfiguration: return "NotOptimalConfiguration";
    case ErrorCode::kGroupOverwhelmed: return "GroupOverwhelmed";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kConditionsNotMet: return "ConditionsNotMet";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace lrc
