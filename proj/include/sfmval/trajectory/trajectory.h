#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfmval/geometry/rotation.h"

namespace sfmval {

enum class TrajectorySource { kColmapImagesTxt, kBlenderExport, kCanonical, kSynthetic };
enum class EulerUnit { kRadians, kDegrees };

std::string_view TrajectorySourceName(TrajectorySource source);
std::optional<TrajectorySource> ParseTrajectorySource(std::string_view name);
std::string_view EulerUnitName(EulerUnit unit);
std::optional<EulerUnit> ParseEulerUnit(std::string_view name);

// A single camera pose, always stored as camera center plus camera-to-world
// orientation regardless of the convention of the file it came from.
struct PoseSample {
  uint64_t frame_key = 0;
  std::optional<std::string> image_name;
  Vector3d position = Vector3d::Zero();
  Quaterniond orientation = IdentityQuaternion<double>();

  bool operator==(const PoseSample&) const = default;
};

struct Trajectory {
  std::vector<PoseSample> samples;
  std::string frame_label;
  TrajectorySource source = TrajectorySource::kCanonical;
  EulerUnit euler_unit = EulerUnit::kRadians;

  bool empty() const { return samples.empty(); }
  size_t size() const { return samples.size(); }

  bool operator==(const Trajectory&) const = default;
};

// Throws EmptyTrajectory / NonMonotonicFrames when the ordering invariant is
// violated.
void ValidateTrajectory(const Trajectory& trajectory);

// Non-fatal findings collected while parsing (e.g. renormalized quaternions).
struct ParseDiagnostics {
  std::vector<std::string> warnings;
};

}  // namespace sfmval
