#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfmval {

enum class ErrorCode {
  kInvalidArgument,
  // Geometry.
  kZeroQuaternion,
  kNotARotation,
  kNonFinite,
  // Trajectory I/O.
  kMalformedPoseLine,
  kDanglingPoseLine,
  kDuplicateImageName,
  kDuplicateFrameKey,
  kMalformedRecord,
  kNonMonotonicFrames,
  kEmptyTrajectory,
  kSchemaVersionMismatch,
  kMalformedDocument,
  kNoDigitsInName,
  kNoOverlap,
  kLengthMismatch,
  // Alignment.
  kNotSymmetric,
  kNoConvergence,
  kDegenerateGeometry,
  kTooFewPoints,
  // Metrics.
  kEmptyInput,
  // Geotagging.
  kLatitudeOutOfRange,
  kOutOfRange,
  kNotAJpeg,
  kCorruptExifSegment,
  kSegmentOverflow,
  kIoError,
  // Synthetic fixtures.
  kInvalidParams,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. what() starts
// with the error name, e.g. "NoOverlap: ...", so it is greppable from the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return ErrorCodeName(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& detail);

}  // namespace sfmval
