#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sfmval/geotag/exif_gps.h"
#include "sfmval/geotag/georef.h"
#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

// Maps a frame key to an image filename, e.g. "frame_%04d.jpg" -> 
// "frame_0042.jpg". Exactly one %d / %0Nd conversion; "%%" is a literal '%'.
class NamePattern {
 public:
  static NamePattern Parse(std::string_view pattern);

  NamePattern(std::string prefix, int width, std::string suffix)
      : prefix_(std::move(prefix)), width_(width), suffix_(std::move(suffix)) {}

  std::string Format(uint64_t frame_key) const;

 private:
  std::string prefix_;
  int width_ = 0;
  std::string suffix_;
};

enum class GeotagStatus { kWritten, kMissingImage, kFailed };
std::string_view GeotagStatusName(GeotagStatus status);

struct GeotagEntry {
  uint64_t frame_key = 0;
  std::string filename;
  GeotagStatus status = GeotagStatus::kWritten;
  std::string detail;
};

struct GeotagReport {
  std::vector<GeotagEntry> entries;

  size_t Count(GeotagStatus status) const;
};

struct GeotagOptions {
  ExifWriteOptions exif;
};

// Writes the GPS fix of every trajectory sample into the matching image in
// `image_dir`. Each file is replaced atomically. Per-file problems end up in
// the report; only a missing directory throws (IoError).
GeotagReport GeotagTrajectory(const std::filesystem::path& image_dir, const Trajectory& trajectory,
                              const GeoRef& ref, const NamePattern& pattern,
                              const GeotagOptions& options = {});

// `frame_key,filename,status,detail`
void WriteGeotagReportCsv(std::ostream& out, const GeotagReport& report);

}  // namespace sfmval
