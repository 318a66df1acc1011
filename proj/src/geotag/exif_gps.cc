#include "sfmval/geotag/exif_gps.h"

#include <array>
#include <cctype>
#include <cmath>
#include <cstring>

#include "sfmval/error.h"
#include "sfmval/geotag/tiff.h"
#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr uint8_t kMarkerSoi = 0xD8;
constexpr uint8_t kMarkerEoi = 0xD9;
constexpr uint8_t kMarkerSos = 0xDA;
constexpr uint8_t kMarkerApp0 = 0xE0;
constexpr uint8_t kMarkerApp1 = 0xE1;
constexpr std::array<uint8_t, 6> kExifHeader = {'E', 'x', 'i', 'f', 0, 0};
constexpr size_t kMaxSegmentPayload = 65533;

constexpr uint16_t kGpsVersionId = 0x0000;
constexpr uint16_t kGpsLatitudeRef = 0x0001;
constexpr uint16_t kGpsLatitude = 0x0002;
constexpr uint16_t kGpsLongitudeRef = 0x0003;
constexpr uint16_t kGpsLongitude = 0x0004;
constexpr uint16_t kGpsAltitudeRef = 0x0005;
constexpr uint16_t kGpsAltitude = 0x0006;
constexpr uint32_t kAltitudeDenominator = 1000;

struct Segment {
  size_t begin = 0;  // first 0xFF of the marker, including fill bytes
  size_t end = 0;
  uint8_t marker = 0;
  size_t payload = 0;  // after the length field
};

struct JpegLayout {
  std::vector<Segment> segments;  // between SOI and the first SOS/EOI
  size_t tail = 0;                // start of SOS/EOI or end of data
};

JpegLayout ParseJpeg(std::span<const uint8_t> data) {
  if (data.size() < 2 || data[0] != 0xFF || data[1] != kMarkerSoi) {
    Fail(ErrorCode::kNotAJpeg, "missing SOI marker");
  }
  JpegLayout layout;
  size_t pos = 2;
  while (pos < data.size()) {
    const size_t begin = pos;
    if (data[pos] != 0xFF) Fail(ErrorCode::kNotAJpeg, "expected marker at byte " + std::to_string(pos));
    while (pos < data.size() && data[pos] == 0xFF) ++pos;
    if (pos >= data.size()) Fail(ErrorCode::kNotAJpeg, "truncated marker");
    const uint8_t marker = data[pos++];
    if (marker == kMarkerSos || marker == kMarkerEoi) {
      layout.tail = begin;
      return layout;
    }
    Segment segment;
    segment.begin = begin;
    segment.marker = marker;
    if ((marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) {
      segment.payload = segment.end = pos;
    } else {
      if (pos + 2 > data.size()) Fail(ErrorCode::kNotAJpeg, "truncated segment length");
      const size_t length = size_t(data[pos]) << 8 | data[pos + 1];
      if (length < 2 || pos + length > data.size()) {
        Fail(ErrorCode::kNotAJpeg, "segment length exceeds file");
      }
      segment.payload = pos + 2;
      segment.end = pos + length;
    }
    pos = segment.end;
    layout.segments.push_back(segment);
  }
  layout.tail = data.size();
  return layout;
}

bool IsExifSegment(std::span<const uint8_t> data, const Segment& s) {
  return s.marker == kMarkerApp1 && s.end - s.payload >= kExifHeader.size() &&
         std::memcmp(data.data() + s.payload, kExifHeader.data(), kExifHeader.size()) == 0;
}

const Segment* FindExif(std::span<const uint8_t> data, const JpegLayout& layout) {
  for (const Segment& s : layout.segments)
    if (IsExifSegment(data, s)) return &s;
  return nullptr;
}

std::span<const uint8_t> TiffPayload(std::span<const uint8_t> data, const Segment& s) {
  return data.subspan(s.payload + kExifHeader.size(), s.end - s.payload - kExifHeader.size());
}

std::array<std::pair<uint32_t, uint32_t>, 3> DmsRationals(const DmsRational& dms) {
  return {{{dms.degrees, 1}, {dms.minutes, 1}, {dms.seconds_numerator, DmsRational::kSecondsDenominator}}};
}

tiff::Directory BuildGpsDirectory(const GpsFix& fix) {
  if (!std::isfinite(fix.alt)) Fail(ErrorCode::kOutOfRange, "altitude not finite");
  const double scaled_alt = std::abs(fix.alt) * kAltitudeDenominator;
  if (!(scaled_alt < 4294967295.0)) {
    Fail(ErrorCode::kOutOfRange, "altitude " + FormatDouble(fix.alt) + " m not representable");
  }
  const DmsRational lat = DmsEncode(fix.lat, GeoAxis::kLatitude);
  const DmsRational lon = DmsEncode(fix.lon, GeoAxis::kLongitude);

  tiff::Directory gps;
  const std::array<uint8_t, 4> version = {2, 3, 0, 0};
  gps.Set(tiff::MakeByte(kGpsVersionId, version));
  gps.Set(tiff::MakeAscii(kGpsLatitudeRef, std::string(1, lat.hemisphere)));
  gps.Set(tiff::MakeRational(kGpsLatitude, DmsRationals(lat)));
  gps.Set(tiff::MakeAscii(kGpsLongitudeRef, std::string(1, lon.hemisphere)));
  gps.Set(tiff::MakeRational(kGpsLongitude, DmsRationals(lon)));
  const std::array<uint8_t, 1> alt_ref = {static_cast<uint8_t>(fix.alt < 0 ? 1 : 0)};
  gps.Set(tiff::MakeByte(kGpsAltitudeRef, alt_ref));
  const std::array<std::pair<uint32_t, uint32_t>, 1> alt = {
      {{static_cast<uint32_t>(std::llround(scaled_alt)), kAltitudeDenominator}}};
  gps.Set(tiff::MakeRational(kGpsAltitude, alt));
  return gps;
}

void Warn(ExifDiagnostics* diagnostics, const std::string& message) {
  if (diagnostics != nullptr) diagnostics->warnings.push_back(message);
}

double RationalValue(const tiff::Entry& entry, size_t index) {
  const auto [num, den] = tiff::ReadRational(entry, index);
  if (den == 0) {
    if (num == 0) return 0.0;
    Fail(ErrorCode::kCorruptExifSegment, "zero denominator in GPS rational");
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

// Degrees from one to three rationals (D, D M, or D M S).
double CoordinateValue(const tiff::Entry& entry) {
  if (entry.count < 1 || entry.count > 3) {
    Fail(ErrorCode::kCorruptExifSegment, "GPS coordinate needs 1 to 3 rationals");
  }
  static constexpr double kScale[3] = {1.0, 1.0 / 60.0, 1.0 / 3600.0};
  double value = 0;
  for (size_t i = 0; i < entry.count; ++i) value += RationalValue(entry, i) * kScale[i];
  return value;
}

// Combines the ref sign with a possibly negative stored value.
double SignedCoordinate(const tiff::Directory& gps, uint16_t ref_tag, uint16_t value_tag,
                        char negative_ref, ExifDiagnostics* diagnostics) {
  const tiff::Entry* value_entry = gps.Find(value_tag);
  const double value = CoordinateValue(*value_entry);
  double sign = 1.0;
  if (const tiff::Entry* ref = gps.Find(ref_tag); ref != nullptr) {
    const std::string text = tiff::ReadAscii(*ref);
    if (!text.empty() && std::toupper(static_cast<unsigned char>(text[0])) == negative_ref) {
      sign = -1.0;
    }
  }
  if (value < 0) {
    Warn(diagnostics, "GPS tag " + std::to_string(value_tag) +
                          " stores a negative value; combined with its hemisphere ref");
  }
  return sign * value;
}

}  // namespace

size_t ScanDataOffset(std::span<const uint8_t> jpeg) { return ParseJpeg(jpeg).tail; }

std::vector<uint8_t> WriteGpsExif(std::span<const uint8_t> jpeg, const GpsFix& fix,
                                  const ExifWriteOptions& options,
                                  ExifDiagnostics* diagnostics) {
  const JpegLayout layout = ParseJpeg(jpeg);
  const Segment* existing = FindExif(jpeg, layout);

  tiff::ExifPayload payload;
  if (existing != nullptr) payload = tiff::ParsePayload(TiffPayload(jpeg, *existing), diagnostics);
  if (options.byte_order) payload.byte_order = *options.byte_order;
  payload.ifd0.children[tiff::kGpsIfdPointer] = BuildGpsDirectory(fix);

  std::vector<uint8_t> segment_payload(kExifHeader.begin(), kExifHeader.end());
  const std::vector<uint8_t> tiff_bytes = tiff::SerializePayload(payload);
  segment_payload.insert(segment_payload.end(), tiff_bytes.begin(), tiff_bytes.end());
  if (segment_payload.size() > kMaxSegmentPayload) {
    Fail(ErrorCode::kSegmentOverflow, "Exif segment of " + std::to_string(segment_payload.size()) +
                                          " bytes exceeds 65533");
  }

  std::vector<uint8_t> out;
  out.reserve(jpeg.size() + segment_payload.size() + 4);
  const auto append = [&out, &jpeg](size_t begin, size_t end) {
    out.insert(out.end(), jpeg.begin() + static_cast<std::ptrdiff_t>(begin),
               jpeg.begin() + static_cast<std::ptrdiff_t>(end));
  };
  const auto append_exif = [&out, &segment_payload]() {
    const size_t length = segment_payload.size() + 2;
    out.push_back(0xFF);
    out.push_back(kMarkerApp1);
    out.push_back(static_cast<uint8_t>(length >> 8));
    out.push_back(static_cast<uint8_t>(length & 0xFF));
    out.insert(out.end(), segment_payload.begin(), segment_payload.end());
  };

  append(0, 2);
  bool written = false;
  for (const Segment& s : layout.segments) {
    if (!written && existing == nullptr && s.marker != kMarkerApp0) {
      append_exif();
      written = true;
    }
    if (&s == existing) {
      append_exif();
      written = true;
      continue;
    }
    append(s.begin, s.end);
  }
  if (!written) append_exif();
  append(layout.tail, jpeg.size());
  return out;
}

std::optional<GpsFix> ReadGpsExif(std::span<const uint8_t> jpeg, ExifDiagnostics* diagnostics) {
  const JpegLayout layout = ParseJpeg(jpeg);
  const Segment* exif = FindExif(jpeg, layout);
  if (exif == nullptr) return std::nullopt;
  const tiff::ExifPayload payload = tiff::ParsePayload(TiffPayload(jpeg, *exif), diagnostics);
  const auto gps_it = payload.ifd0.children.find(tiff::kGpsIfdPointer);
  if (gps_it == payload.ifd0.children.end()) return std::nullopt;
  const tiff::Directory& gps = gps_it->second;
  if (gps.Find(kGpsLatitude) == nullptr || gps.Find(kGpsLongitude) == nullptr) return std::nullopt;

  GpsFix fix;
  fix.lat = SignedCoordinate(gps, kGpsLatitudeRef, kGpsLatitude, 'S', diagnostics);
  fix.lon = SignedCoordinate(gps, kGpsLongitudeRef, kGpsLongitude, 'W', diagnostics);
  if (const tiff::Entry* alt = gps.Find(kGpsAltitude); alt != nullptr) {
    if (alt->count < 1) Fail(ErrorCode::kCorruptExifSegment, "empty GPS altitude");
    fix.alt = RationalValue(*alt, 0);
    if (fix.alt < 0) Warn(diagnostics, "GPS altitude stored as a negative value");
    const tiff::Entry* ref = gps.Find(kGpsAltitudeRef);
    if (ref != nullptr && !ref->data.empty() && ref->data[0] == 1) fix.alt = -fix.alt;
  }
  return fix;
}

std::optional<ByteOrder> ReadExifByteOrder(std::span<const uint8_t> jpeg) {
  const JpegLayout layout = ParseJpeg(jpeg);
  const Segment* exif = FindExif(jpeg, layout);
  if (exif == nullptr) return std::nullopt;
  return tiff::ParsePayload(TiffPayload(jpeg, *exif)).byte_order;
}

}  // namespace sfmval
