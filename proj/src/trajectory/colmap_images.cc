#include "sfmval/trajectory/colmap_images.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr double kUnitQuaternionWarnThreshold = 1e-3;

[[noreturn]] void FailLine(ErrorCode code, size_t line_no, const std::string& detail) {
  Fail(code, "line " + std::to_string(line_no) + ": " + detail);
}

}  // namespace

uint64_t ExtractFrameKey(std::string_view image_name) {
  if (image_name.empty()) {
    Fail(ErrorCode::kNoDigitsInName, "empty image name");
  }
  std::string_view stem = image_name;
  if (const size_t slash = stem.find_last_of("/\\"); slash != std::string_view::npos) {
    stem.remove_prefix(slash + 1);
  }
  if (const size_t dot = stem.rfind('.'); dot != std::string_view::npos && dot > 0) {
    stem = stem.substr(0, dot);
  }
  size_t end = stem.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
  if (end == 0) {
    Fail(ErrorCode::kNoDigitsInName, "no digits in '" + std::string(image_name) + "'");
  }
  size_t begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
  const auto key = ParseUint(stem.substr(begin, end - begin));
  if (!key) {
    Fail(ErrorCode::kNoDigitsInName,
         "digit run in '" + std::string(image_name) + "' does not fit 64 bits");
  }
  return *key;
}

Trajectory ParseColmapImages(std::istream& in, ParseDiagnostics* diagnostics) {
  Trajectory trajectory;
  trajectory.frame_label = "colmap-sfm";
  trajectory.source = TrajectorySource::kColmapImagesTxt;

  std::unordered_set<std::string> names;
  std::unordered_set<uint64_t> keys;
  std::string line;
  size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    // IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME
    const auto tokens = SplitWhitespace(trimmed);
    if (tokens.size() < 10) {
      FailLine(ErrorCode::kMalformedPoseLine, line_no,
               "expected 10 fields, found " + std::to_string(tokens.size()));
    }
    if (!ParseUint(tokens[0]) || !ParseUint(tokens[8])) {
      FailLine(ErrorCode::kMalformedPoseLine, line_no, "non-integer image or camera id");
    }
    double values[7];
    for (int i = 0; i < 7; ++i) {
      const auto v = ParseDouble(tokens[1 + i]);
      if (!v) {
        FailLine(ErrorCode::kMalformedPoseLine, line_no,
                 "non-numeric field '" + std::string(tokens[1 + i]) + "'");
      }
      values[i] = *v;
    }
    // NAME is the remainder of the line, so names containing spaces survive.
    const size_t name_offset = static_cast<size_t>(tokens[9].data() - trimmed.data());
    std::string name(Trim(trimmed.substr(name_offset)));

    if (in.peek() == std::char_traits<char>::eof()) {
      FailLine(ErrorCode::kDanglingPoseLine, line_no,
               "pose line for '" + name + "' has no following points line");
    }
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    ++line_no;

    const Quaterniond q_file(values[0], values[1], values[2], values[3]);
    const Vector3d t_file(values[4], values[5], values[6]);
    Quaterniond q_unit;
    try {
      q_unit = NormalizeQuaternion<double>(q_file);
    } catch (const Error& e) {
      FailLine(ErrorCode::kMalformedPoseLine, line_no - 1, e.what());
    }
    const double deviation = std::abs(q_file.norm() - 1.0);
    if (deviation > kUnitQuaternionWarnThreshold && diagnostics != nullptr) {
      diagnostics->warnings.push_back("line " + std::to_string(line_no - 1) +
                                      ": quaternion norm deviates from 1 by " +
                                      FormatDouble(deviation) + "; normalized");
    }

    if (!names.insert(name).second) {
      FailLine(ErrorCode::kDuplicateImageName, line_no - 1, "image name '" + name + "' repeats");
    }
    PoseSample sample;
    try {
      sample.frame_key = ExtractFrameKey(name);
    } catch (const Error& e) {
      FailLine(e.code(), line_no - 1, e.what());
    }
    if (!keys.insert(sample.frame_key).second) {
      FailLine(ErrorCode::kDuplicateFrameKey, line_no - 1,
               "frame key " + std::to_string(sample.frame_key) + " of '" + name + "' repeats");
    }
    sample.position = ProjectionCenterFromPose<double>(q_unit, t_file);
    sample.orientation = CanonicalQuaternion<double>(QuaternionConjugate<double>(q_unit));
    sample.image_name = std::move(name);
    trajectory.samples.push_back(std::move(sample));
  }

  if (trajectory.samples.empty()) {
    Fail(ErrorCode::kEmptyTrajectory, "no image poses found");
  }
  std::sort(trajectory.samples.begin(), trajectory.samples.end(),
            [](const PoseSample& a, const PoseSample& b) { return a.frame_key < b.frame_key; });
  return trajectory;
}

}  // namespace sfmval
