#pragma once

#include <stdexcept>
#include <string>

namespace bsal {

enum class ErrorCode {
  // geometry / core
  EmptyIntersection,
  UnsupportedChannelCount,
  // saliency
  ImageTooSmall,
  InvalidParams,
  // metrics
  EmptyGroundTruth,
  NoFixations,
  DimensionMismatch,
  ZeroVariance,
  // fixation
  OutOfFrame,
  NonMonotonicTimestamps,
  // significance
  MissingLabels,
  EmptyTrainingSet,
  // ingest / report
  ParseError,
  MissingFile,
  DuplicateImageId,
  InvalidBox,
  ConfidenceOutOfRange,
  FormatError,
  DimensionError,
  UnsupportedMagic,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::UnsupportedChannelCount: return "UnsupportedChannelCount";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::NoFixations: return "NoFixations";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::OutOfFrame: return "OutOfFrame";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::ConfidenceOutOfRange: return "ConfidenceOutOfRange";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::UnsupportedMagic: return "UnsupportedMagic";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

// Single exception type for all data-level failures. Messages carry the
// location (path, row, byte offset) whenever one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bsal
