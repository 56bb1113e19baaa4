#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surfvox {

enum class ErrorCode {
  InvalidConfig,
  SingularCamera,
  DegenerateRay,
  ShapeMismatch,
  UnknownPredictor,
  EmptyInput,
  SingleClass,
  CubeMismatch,
  TooFewViews,
  ZeroWeightSum,
  NoViews,
  InvalidCandidates,
  ParseError,
  UnsupportedFormat,
  IoError,
  InvalidRig,
  EmptyGroundTruth,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` carries
// the failure kind so callers (the CLI in particular) can map it without
// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace surfvox
