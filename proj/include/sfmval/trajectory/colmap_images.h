#pragma once

#include <cstdint>
#include <istream>
#include <string_view>

#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

// Frame key of an image name: the last maximal run of ASCII digits in the
// stem of the final path component. "cam2_shot_0100_v3.png" yields 3.
// Throws NoDigitsInName.
uint64_t ExtractFrameKey(std::string_view image_name);

// Reads a COLMAP text-format images.txt. Only the pose line of each image is
// retained; the 2D point line that follows is skipped with a bounded scan, so
// memory use grows with the number of images and not with the file size.
//
// Poses are converted from COLMAP's world-to-camera (q, t) to camera center
// C = -R(q)^T t with camera-to-world orientation conj(q). Samples are
// returned sorted by frame key.
Trajectory ParseColmapImages(std::istream& in, ParseDiagnostics* diagnostics = nullptr);

}  // namespace sfmval
