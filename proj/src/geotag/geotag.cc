#include "sfmval/geotag/geotag.h"

#include <algorithm>
#include <cctype>

#include "sfmval/metrics/report.h"
#include "sfmval/util/file.h"
#include "sfmval/util/text.h"

namespace sfmval {

NamePattern NamePattern::Parse(std::string_view pattern) {
  std::string prefix, suffix;
  int width = -1;
  for (size_t i = 0; i < pattern.size(); ++i) {
    std::string& target = width < 0 ? prefix : suffix;
    if (pattern[i] != '%') {
      target += pattern[i];
      continue;
    }
    if (i + 1 < pattern.size() && pattern[i + 1] == '%') {
      target += '%';
      ++i;
      continue;
    }
    if (width >= 0) Fail(ErrorCode::kInvalidArgument, "name pattern has more than one conversion");
    size_t j = i + 1;
    int w = 0;
    if (j < pattern.size() && pattern[j] == '0') {
      ++j;
      while (j < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[j]))) {
        w = w * 10 + (pattern[j] - '0');
        if (w > 32) Fail(ErrorCode::kInvalidArgument, "name pattern width too large");
        ++j;
      }
    }
    if (j >= pattern.size() || pattern[j] != 'd') {
      Fail(ErrorCode::kInvalidArgument,
           "name pattern '" + std::string(pattern) + "' needs %d or %0Nd");
    }
    width = w;
    i = j;
  }
  if (width < 0) Fail(ErrorCode::kInvalidArgument, "name pattern has no %d conversion");
  return NamePattern(std::move(prefix), width, std::move(suffix));
}

std::string NamePattern::Format(uint64_t frame_key) const {
  std::string digits = std::to_string(frame_key);
  if (static_cast<int>(digits.size()) < width_) {
    digits.insert(0, static_cast<size_t>(width_) - digits.size(), '0');
  }
  return prefix_ + digits + suffix_;
}

std::string_view GeotagStatusName(GeotagStatus status) {
  switch (status) {
    case GeotagStatus::kWritten: return "written";
    case GeotagStatus::kMissingImage: return "missing";
    case GeotagStatus::kFailed: return "failed";
  }
  return "unknown";
}

size_t GeotagReport::Count(GeotagStatus status) const {
  return static_cast<size_t>(std::count_if(entries.begin(), entries.end(),
                                           [status](const GeotagEntry& e) { return e.status == status; }));
}

GeotagReport GeotagTrajectory(const std::filesystem::path& image_dir, const Trajectory& trajectory,
                              const GeoRef& ref, const NamePattern& pattern,
                              const GeotagOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_directory(image_dir, ec)) {
    Fail(ErrorCode::kIoError, "image directory " + image_dir.string() + " does not exist");
  }
  ValidateGeoRef(ref);

  GeotagReport report;
  report.entries.reserve(trajectory.size());
  for (const PoseSample& sample : trajectory.samples) {
    GeotagEntry entry;
    entry.frame_key = sample.frame_key;
    entry.filename = pattern.Format(sample.frame_key);
    const std::filesystem::path path = image_dir / entry.filename;
    if (!std::filesystem::is_regular_file(path, ec)) {
      entry.status = GeotagStatus::kMissingImage;
      entry.detail = "no such file";
      report.entries.push_back(std::move(entry));
      continue;
    }
    try {
      const GpsFix fix = LocalToWgs84(sample.position, ref);
      const std::string bytes = ReadFileBytes(path);
      const std::vector<uint8_t> tagged = WriteGpsExif(
          std::span(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()), fix,
          options.exif);
      WriteFileAtomic(path, std::string_view(reinterpret_cast<const char*>(tagged.data()),
                                             tagged.size()));
      entry.status = GeotagStatus::kWritten;
      entry.detail = "lat=" + FormatDouble(fix.lat) + " lon=" + FormatDouble(fix.lon) +
                     " alt=" + FormatDouble(fix.alt);
    } catch (const Error& e) {
      entry.status = GeotagStatus::kFailed;
      entry.detail = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

void WriteGeotagReportCsv(std::ostream& out, const GeotagReport& report) {
  out << "frame_key,filename,status,detail\n";
  for (const GeotagEntry& e : report.entries) {
    out << e.frame_key << ',' << CsvField(e.filename) << ',' << GeotagStatusName(e.status) << ','
        << CsvField(e.detail) << '\n';
  }
}

}  // namespace sfmval
