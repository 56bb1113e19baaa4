#include "surfvox/error.hpp"

namespace surfvox {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SingularCamera: return "SingularCamera";
    case ErrorCode::DegenerateRay: return "DegenerateRay";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownPredictor: return "UnknownPredictor";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::CubeMismatch: return "CubeMismatch";
    case ErrorCode::TooFewViews: return "TooFewViews";
    case ErrorCode::ZeroWeightSum: return "ZeroWeightSum";
    case ErrorCode::NoViews: return "NoViews";
    case ErrorCode::InvalidCandidates: return "InvalidCandidates";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidRig: return "InvalidRig";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace surfvox
