#include "sfmval/error.h"

namespace sfmval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroQuaternion: return "ZeroQuaternion";
    case ErrorCode::kNotARotation: return "NotARotation";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kMalformedPoseLine: return "MalformedPoseLine";
    case ErrorCode::kDanglingPoseLine: return "DanglingPoseLine";
    case ErrorCode::kDuplicateImageName: return "DuplicateImageName";
    case ErrorCode::kDuplicateFrameKey: return "DuplicateFrameKey";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kNonMonotonicFrames: return "NonMonotonicFrames";
    case ErrorCode::kEmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kNoDigitsInName: return "NoDigitsInName";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kLatitudeOutOfRange: return "LatitudeOutOfRange";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNotAJpeg: return "NotAJpeg";
    case ErrorCode::kCorruptExifSegment: return "CorruptExifSegment";
    case ErrorCode::kSegmentOverflow: return "SegmentOverflow";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidParams: return "InvalidParams";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code) {}

void Fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace sfmval
