#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

enum class KeyMode { kByFrameKey, kByImageName, kByOrder };

std::string_view KeyModeName(KeyMode mode);

struct CorrespondenceSet {
  // (index into ground truth, index into estimate), sorted by the first.
  std::vector<std::pair<size_t, size_t>> pairs;
  KeyMode key_mode = KeyMode::kByFrameKey;

  size_t size() const { return pairs.size(); }
};

// Throws EmptyTrajectory, NoOverlap, LengthMismatch (kByOrder only).
CorrespondenceSet MatchCorrespondences(const Trajectory& gt, const Trajectory& est,
                                       KeyMode mode);

}  // namespace sfmval
