#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sfmval/alignment/horn.h"
#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

enum class OrientationMode { kForward, kSideview, kTiltedSideview };

std::string_view OrientationModeName(OrientationMode mode);
std::optional<OrientationMode> ParseOrientationMode(std::string_view name);

struct CircuitParams {
  double extent_x = 100.0;
  double extent_y = 100.0;
  int n_frames = 3000;
  double height = 2.0;
  OrientationMode orientation_mode = OrientationMode::kSideview;
  double tilt_deg = 30.0;  // TiltedSideview only
  double corner_radius = 5.0;
};

void ValidateCircuitParams(const CircuitParams& params);

// Perimeter of the rounded rectangle.
double CircuitLength(const CircuitParams& params);

// Closed counter-clockwise rounded rectangle inside [0, extent_x] x
// [0, extent_y] at constant height, starting at (corner_radius, 0) heading +x.
// Frames 1..n are spaced evenly in arc length.
//
// Orientation is camera-to-world with camera axes x right, y down, z along
// the optical axis: Forward looks along the tangent, Sideview looks
// horizontally to the left of travel, TiltedSideview pitches that up by
// tilt_deg. Throws InvalidParams.
Trajectory GenerateCircuit(const CircuitParams& params);

// Camera-to-world orientation whose optical axis is `axis`, with image rows
// kept level with respect to world z.
Quaterniond LookOrientation(const Vector3d& axis);

struct NoiseModel {
  Vector3d sigma = Vector3d::Zero();       // white noise per axis, meters
  Vector3d drift_step = Vector3d::Zero();  // random-walk step sigma per axis, meters
  std::optional<SimilarityTransformd> gauge;
  double dropout = 0.0;  // fraction of frames removed, [0, 1)
  uint64_t seed = 0;
};

// Position error = random-walk drift + white noise; then the optional gauge
// similarity is applied to every pose; then round(dropout * n) frames are
// removed uniformly at random. Orientations change only through the gauge.
Trajectory Perturb(const Trajectory& trajectory, const NoiseModel& model);

}  // namespace sfmval
