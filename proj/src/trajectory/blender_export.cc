#include "sfmval/trajectory/blender_export.h"

#include <numbers>
#include <string>

#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void FailRecord(ErrorCode code, size_t line_no, const std::string& detail) {
  Fail(code, "line " + std::to_string(line_no) + ": " + detail);
}

}  // namespace

Trajectory ParseBlenderExport(std::istream& in, EulerUnit unit) {
  Trajectory trajectory;
  trajectory.frame_label = "blender-world";
  trajectory.source = TrajectorySource::kBlenderExport;
  trajectory.euler_unit = unit;
  const double angle_scale = unit == EulerUnit::kDegrees ? kDegToRad : 1.0;

  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view record = Trim(line);
    if (record.empty()) continue;
    if (!have_header) {
      if (record != kBlenderExportHeader) {
        FailRecord(ErrorCode::kMalformedRecord, line_no,
                   "expected header '" + std::string(kBlenderExportHeader) + "'");
      }
      have_header = true;
      continue;
    }
    const auto fields = Split(record, ',');
    if (fields.size() != 7) {
      FailRecord(ErrorCode::kMalformedRecord, line_no,
                 "expected 7 fields, found " + std::to_string(fields.size()));
    }
    const auto frame = ParseUint(Trim(fields[0]));
    if (!frame) {
      FailRecord(ErrorCode::kMalformedRecord, line_no, "frame is not a nonnegative integer");
    }
    double v[6];
    for (int i = 0; i < 6; ++i) {
      const auto parsed = ParseDouble(Trim(fields[1 + i]));
      if (!parsed) {
        FailRecord(ErrorCode::kMalformedRecord, line_no,
                   "non-numeric field '" + std::string(fields[1 + i]) + "'");
      }
      v[i] = *parsed;
    }
    if (!trajectory.samples.empty() && *frame <= trajectory.samples.back().frame_key) {
      FailRecord(ErrorCode::kNonMonotonicFrames, line_no,
                 "frame " + std::to_string(*frame) + " does not increase");
    }
    PoseSample sample;
    sample.frame_key = *frame;
    sample.position = Vector3d(v[0], v[1], v[2]);
    sample.orientation = EulerXYZToQuaternion<double>(
        {v[3] * angle_scale, v[4] * angle_scale, v[5] * angle_scale});
    trajectory.samples.push_back(std::move(sample));
  }
  if (trajectory.samples.empty()) {
    Fail(ErrorCode::kEmptyTrajectory, "no frame records found");
  }
  return trajectory;
}

void WriteBlenderExport(const Trajectory& trajectory, std::ostream& out, EulerUnit unit) {
  ValidateTrajectory(trajectory);
  const double angle_scale = unit == EulerUnit::kDegrees ? 1.0 / kDegToRad : 1.0;
  out << kBlenderExportHeader << '\n';
  for (const PoseSample& s : trajectory.samples) {
    const EulerXYZd e =
        RotationMatrixToEulerXYZ<double>(QuaternionToRotationMatrix<double>(s.orientation));
    out << s.frame_key << ',' << FormatDouble(s.position.x()) << ','
        << FormatDouble(s.position.y()) << ',' << FormatDouble(s.position.z()) << ','
        << FormatDouble(e.rx * angle_scale) << ',' << FormatDouble(e.ry * angle_scale) << ','
        << FormatDouble(e.rz * angle_scale) << '\n';
  }
}

}  // namespace sfmval
