#include "sfmval/trajectory/correspondence.h"

#include <string>
#include <unordered_map>

namespace sfmval {

std::string_view KeyModeName(KeyMode mode) {
  switch (mode) {
    case KeyMode::kByFrameKey: return "frame";
    case KeyMode::kByImageName: return "name";
    case KeyMode::kByOrder: return "order";
  }
  return "unknown";
}

CorrespondenceSet MatchCorrespondences(const Trajectory& gt, const Trajectory& est,
                                       KeyMode mode) {
  if (gt.empty() || est.empty()) {
    Fail(ErrorCode::kEmptyTrajectory, "cannot match an empty trajectory");
  }
  CorrespondenceSet result;
  result.key_mode = mode;

  switch (mode) {
    case KeyMode::kByOrder:
      if (gt.size() != est.size()) {
        Fail(ErrorCode::kLengthMismatch, "order matching needs equal lengths, got " +
                                             std::to_string(gt.size()) + " and " +
                                             std::to_string(est.size()));
      }
      result.pairs.reserve(gt.size());
      for (size_t i = 0; i < gt.size(); ++i) result.pairs.emplace_back(i, i);
      break;

    case KeyMode::kByFrameKey: {
      std::unordered_map<uint64_t, size_t> est_index;
      est_index.reserve(est.size());
      for (size_t j = 0; j < est.size(); ++j) {
        if (!est_index.emplace(est.samples[j].frame_key, j).second) {
          Fail(ErrorCode::kDuplicateFrameKey,
               "estimate repeats frame key " + std::to_string(est.samples[j].frame_key));
        }
      }
      for (size_t i = 0; i < gt.size(); ++i) {
        if (auto it = est_index.find(gt.samples[i].frame_key); it != est_index.end()) {
          result.pairs.emplace_back(i, it->second);
        }
      }
      break;
    }

    case KeyMode::kByImageName: {
      std::unordered_map<std::string_view, size_t> est_index;
      est_index.reserve(est.size());
      for (size_t j = 0; j < est.size(); ++j) {
        if (!est.samples[j].image_name) continue;
        if (!est_index.emplace(*est.samples[j].image_name, j).second) {
          Fail(ErrorCode::kDuplicateImageName,
               "estimate repeats image name '" + *est.samples[j].image_name + "'");
        }
      }
      for (size_t i = 0; i < gt.size(); ++i) {
        if (!gt.samples[i].image_name) continue;
        if (auto it = est_index.find(*gt.samples[i].image_name); it != est_index.end()) {
          result.pairs.emplace_back(i, it->second);
        }
      }
      break;
    }
  }

  if (result.pairs.empty()) {
    Fail(ErrorCode::kNoOverlap, "no corresponding samples by " + std::string(KeyModeName(mode)));
  }
  return result;
}

}  // namespace sfmval
