#include "sfmval/trajectory/trajectory.h"

#include <string>

namespace sfmval {

std::string_view TrajectorySourceName(TrajectorySource source) {
  switch (source) {
    case TrajectorySource::kColmapImagesTxt: return "ColmapImagesTxt";
    case TrajectorySource::kBlenderExport: return "BlenderExport";
    case TrajectorySource::kCanonical: return "Canonical";
    case TrajectorySource::kSynthetic: return "Synthetic";
  }
  return "Unknown";
}

std::optional<TrajectorySource> ParseTrajectorySource(std::string_view name) {
  for (auto s : {TrajectorySource::kColmapImagesTxt, TrajectorySource::kBlenderExport,
                 TrajectorySource::kCanonical, TrajectorySource::kSynthetic}) {
    if (TrajectorySourceName(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view EulerUnitName(EulerUnit unit) {
  return unit == EulerUnit::kDegrees ? "Degrees" : "Radians";
}

std::optional<EulerUnit> ParseEulerUnit(std::string_view name) {
  if (name == "Radians") return EulerUnit::kRadians;
  if (name == "Degrees") return EulerUnit::kDegrees;
  return std::nullopt;
}

void ValidateTrajectory(const Trajectory& trajectory) {
  if (trajectory.samples.empty()) {
    Fail(ErrorCode::kEmptyTrajectory, "trajectory has no samples");
  }
  for (size_t i = 1; i < trajectory.samples.size(); ++i) {
    if (trajectory.samples[i].frame_key <= trajectory.samples[i - 1].frame_key) {
      Fail(ErrorCode::kNonMonotonicFrames,
           "frame key " + std::to_string(trajectory.samples[i].frame_key) +
               " does not follow " +
               std::to_string(trajectory.samples[i - 1].frame_key));
    }
  }
}

}  // namespace sfmval
