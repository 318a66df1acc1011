#pragma once

#include <string>
#include <string_view>

#include "sfmval/alignment/horn.h"
#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

// Maps positions p -> s R p + t and orientations q -> q_T * q. Scale does not
// affect orientation. An empty `frame_label` yields "aligned:<old label>".
Trajectory ApplySimilarity(const SimilarityTransformd& transform, const Trajectory& trajectory,
                           std::string frame_label = {});

// One-line serialization: `sfmval-transform v1: s qw qx qy qz tx ty tz`.
std::string FormatTransform(const SimilarityTransformd& transform);
SimilarityTransformd ParseTransform(std::string_view line);

}  // namespace sfmval
