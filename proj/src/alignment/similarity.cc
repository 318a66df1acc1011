#include "sfmval/alignment/similarity.h"

#include "sfmval/util/text.h"

namespace sfmval {

namespace {
constexpr std::string_view kTransformPrefix = "sfmval-transform v1:";
}

Trajectory ApplySimilarity(const SimilarityTransformd& transform, const Trajectory& trajectory,
                           std::string frame_label) {
  Trajectory out = trajectory;
  out.frame_label =
      frame_label.empty() ? "aligned:" + trajectory.frame_label : std::move(frame_label);
  const Matrix3d R = transform.RotationMatrix();
  for (PoseSample& s : out.samples) {
    s.position = transform.scale * (R * s.position) + transform.translation;
    s.orientation = UnitQuaternion<double>(QuaternionMultiply<double>(transform.rotation, s.orientation));
  }
  return out;
}

std::string FormatTransform(const SimilarityTransformd& transform) {
  std::string line(kTransformPrefix);
  line += ' ' + FormatDouble(transform.scale);
  for (int i = 0; i < 4; ++i) line += ' ' + FormatDouble(transform.rotation(i));
  for (int i = 0; i < 3; ++i) line += ' ' + FormatDouble(transform.translation(i));
  return line;
}

SimilarityTransformd ParseTransform(std::string_view line) {
  line = Trim(line);
  if (line.substr(0, kTransformPrefix.size()) != kTransformPrefix) {
    if (line.substr(0, 17) == "sfmval-transform ") {
      Fail(ErrorCode::kSchemaVersionMismatch, "unsupported transform version");
    }
    Fail(ErrorCode::kMalformedDocument, "missing '" + std::string(kTransformPrefix) + "' prefix");
  }
  const auto fields = SplitWhitespace(line.substr(kTransformPrefix.size()));
  if (fields.size() != 8) {
    Fail(ErrorCode::kMalformedDocument,
         "transform needs 8 numbers, found " + std::to_string(fields.size()));
  }
  double v[8];
  for (int i = 0; i < 8; ++i) {
    const auto parsed = ParseDouble(fields[i]);
    if (!parsed) Fail(ErrorCode::kMalformedDocument, "non-numeric '" + std::string(fields[i]) + "'");
    v[i] = *parsed;
  }
  if (!(v[0] > 0)) Fail(ErrorCode::kMalformedDocument, "scale must be positive");
  SimilarityTransformd T;
  T.scale = v[0];
  T.rotation = Quaterniond(v[1], v[2], v[3], v[4]);
  if (std::abs(T.rotation.norm() - 1.0) > 1e-9) T.rotation = UnitQuaternion<double>(T.rotation);
  T.translation = Vector3d(v[5], v[6], v[7]);
  return T;
}

}  // namespace sfmval
