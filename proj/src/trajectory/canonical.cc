#include "sfmval/trajectory/canonical.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sfmval/util/file.h"
#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr double kRenormalizeThreshold = 1e-9;

std::string Escape(std::string_view text) {
  if (text == "-") return "%2D";
  std::string out;
  out.reserve(text.size());
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (const char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '%') {
      const auto byte = static_cast<unsigned char>(c);
      out += '%';
      out += kHex[byte >> 4];
      out += kHex[byte & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

std::optional<std::string> Unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    if (i + 2 >= text.size()) return std::nullopt;
    unsigned value = 0;
    for (size_t k = 1; k <= 2; ++k) {
      const char h = text[i + k];
      value <<= 4;
      if (h >= '0' && h <= '9') value |= static_cast<unsigned>(h - '0');
      else if (h >= 'A' && h <= 'F') value |= static_cast<unsigned>(h - 'A' + 10);
      else if (h >= 'a' && h <= 'f') value |= static_cast<unsigned>(h - 'a' + 10);
      else return std::nullopt;
    }
    out += static_cast<char>(value);
    i += 2;
  }
  return out;
}

[[noreturn]] void FailDoc(size_t line_no, const std::string& detail) {
  Fail(ErrorCode::kMalformedDocument, "line " + std::to_string(line_no) + ": " + detail);
}

}  // namespace

void WriteCanonical(const Trajectory& trajectory, std::ostream& out) {
  ValidateTrajectory(trajectory);
  out << kCanonicalMagic << ' ' << kCanonicalVersion << '\n';
  out << "@frame_label " << Escape(trajectory.frame_label) << '\n';
  out << "@source " << TrajectorySourceName(trajectory.source) << '\n';
  out << "@euler_unit " << EulerUnitName(trajectory.euler_unit) << '\n';
  for (const PoseSample& s : trajectory.samples) {
    if (s.image_name && s.image_name->empty()) {
      Fail(ErrorCode::kMalformedDocument,
           "frame " + std::to_string(s.frame_key) + " has an empty image name");
    }
    out << s.frame_key << ' ' << (s.image_name ? Escape(*s.image_name) : std::string("-"));
    for (int i = 0; i < 3; ++i) out << ' ' << FormatDouble(s.position(i));
    for (int i = 0; i < 4; ++i) out << ' ' << FormatDouble(s.orientation(i));
    out << '\n';
  }
}

std::string ToCanonicalString(const Trajectory& trajectory) {
  std::ostringstream out;
  WriteCanonical(trajectory, out);
  return out.str();
}

Trajectory ReadCanonical(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) {
    Fail(ErrorCode::kMalformedDocument, "empty document");
  }
  ++line_no;
  {
    const auto header = SplitWhitespace(Trim(line));
    if (header.size() != 2 || header[0] != kCanonicalMagic) {
      FailDoc(line_no, "missing '" + std::string(kCanonicalMagic) + "' header");
    }
    if (header[1] != kCanonicalVersion) {
      Fail(ErrorCode::kSchemaVersionMismatch,
           "expected " + std::string(kCanonicalVersion) + ", found " + std::string(header[1]));
    }
  }

  Trajectory trajectory;
  trajectory.source = TrajectorySource::kCanonical;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    if (trimmed.front() == '@') {
      const size_t space = trimmed.find_first_of(" \t");
      const std::string_view key = trimmed.substr(1, space == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : space - 1);
      const std::string_view value =
          space == std::string_view::npos ? std::string_view() : Trim(trimmed.substr(space));
      if (key == "frame_label") {
        auto label = Unescape(value);
        if (!label) FailDoc(line_no, "bad escape in frame_label");
        trajectory.frame_label = std::move(*label);
      } else if (key == "source") {
        const auto source = ParseTrajectorySource(value);
        if (!source) FailDoc(line_no, "unknown source '" + std::string(value) + "'");
        trajectory.source = *source;
      } else if (key == "euler_unit") {
        const auto unit = ParseEulerUnit(value);
        if (!unit) FailDoc(line_no, "unknown euler_unit '" + std::string(value) + "'");
        trajectory.euler_unit = *unit;
      }
      continue;
    }

    const auto fields = SplitWhitespace(trimmed);
    if (fields.size() < 9) {
      FailDoc(line_no, "expected 9 fields, found " + std::to_string(fields.size()));
    }
    PoseSample sample;
    const auto key = ParseUint(fields[0]);
    if (!key) FailDoc(line_no, "bad frame key '" + std::string(fields[0]) + "'");
    sample.frame_key = *key;
    if (fields[1] != "-") {
      auto name = Unescape(fields[1]);
      if (!name || name->empty()) FailDoc(line_no, "bad image name");
      sample.image_name = std::move(*name);
    }
    double v[7];
    for (int i = 0; i < 7; ++i) {
      const auto parsed = ParseDouble(fields[2 + i]);
      if (!parsed) FailDoc(line_no, "non-numeric field '" + std::string(fields[2 + i]) + "'");
      v[i] = *parsed;
    }
    sample.position = Vector3d(v[0], v[1], v[2]);
    Quaterniond q(v[3], v[4], v[5], v[6]);
    if (std::abs(q.norm() - 1.0) > kRenormalizeThreshold) {
      try {
        q = UnitQuaternion<double>(q);
      } catch (const Error& e) {
        FailDoc(line_no, e.what());
      }
    }
    sample.orientation = q;
    trajectory.samples.push_back(std::move(sample));
  }
  ValidateTrajectory(trajectory);
  return trajectory;
}

void WriteCanonicalFile(const Trajectory& trajectory, const std::filesystem::path& path) {
  WriteFileAtomic(path, ToCanonicalString(trajectory));
}

Trajectory ReadCanonicalFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadCanonical(in);
}

}  // namespace sfmval
