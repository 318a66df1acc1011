#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfmval/geotag/georef.h"

namespace sfmval {

enum class ByteOrder { kLittleEndian, kBigEndian };

struct ExifWriteOptions {
  // TIFF byte order of the rewritten segment. Unset keeps the order of an
  // existing Exif segment, or little-endian when there is none.
  std::optional<ByteOrder> byte_order;
};

struct ExifDiagnostics {
  std::vector<std::string> warnings;
};

// Returns a copy of `jpeg` whose APP1 Exif segment carries a GPS IFD for
// `fix`. Other IFD0/Exif/Interop entries and the thumbnail are preserved;
// any previous GPS IFD is replaced; everything outside the Exif segment is
// copied byte for byte.
//
// GPS tags written: 0x0000 version, 0x0001/0x0002 latitude ref and DMS,
// 0x0003/0x0004 longitude ref and DMS (seconds in 1/10000), 0x0005 altitude
// ref (0 above, 1 below sea level), 0x0006 |altitude| in 1/1000 m.
//
// Throws NotAJpeg, CorruptExifSegment, SegmentOverflow, OutOfRange.
std::vector<uint8_t> WriteGpsExif(std::span<const uint8_t> jpeg, const GpsFix& fix,
                                  const ExifWriteOptions& options = {},
                                  ExifDiagnostics* diagnostics = nullptr);

// Absent when there is no Exif segment or no GPS latitude/longitude.
// Accepts both "II" and "MM" TIFF headers. Signs come from the hemisphere
// refs; a negative SRATIONAL value is combined multiplicatively with its ref
// and reported as a warning.
std::optional<GpsFix> ReadGpsExif(std::span<const uint8_t> jpeg,
                                  ExifDiagnostics* diagnostics = nullptr);

// Byte order of the Exif segment, if any.
std::optional<ByteOrder> ReadExifByteOrder(std::span<const uint8_t> jpeg);

// Offset of the first SOS marker; bytes from here on are entropy-coded scan
// data and trailing segments, which the writer never touches.
size_t ScanDataOffset(std::span<const uint8_t> jpeg);

}  // namespace sfmval
