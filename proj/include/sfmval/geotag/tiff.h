#pragma once

// Minimal TIFF/EXIF directory model: enough to relocate every entry of an
// Exif APP1 payload when the GPS directory is replaced.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfmval/geotag/exif_gps.h"

namespace sfmval::tiff {

enum Type : uint16_t {
  kByte = 1,
  kAscii = 2,
  kShort = 3,
  kLong = 4,
  kRational = 5,
  kSByte = 6,
  kUndefined = 7,
  kSShort = 8,
  kSLong = 9,
  kSRational = 10,
  kFloat = 11,
  kDouble = 12,
};

inline constexpr uint16_t kExifIfdPointer = 0x8769;
inline constexpr uint16_t kGpsIfdPointer = 0x8825;
inline constexpr uint16_t kInteropIfdPointer = 0xA005;
inline constexpr uint16_t kThumbnailOffset = 0x0201;
inline constexpr uint16_t kThumbnailLength = 0x0202;

// Size of one value of `type`, or 0 for unknown types.
size_t TypeSize(uint16_t type);

struct Entry {
  uint16_t tag = 0;
  uint16_t type = 0;
  uint32_t count = 0;
  // Value bytes in little-endian order regardless of the file's order.
  std::vector<uint8_t> data;

  bool operator==(const Entry&) const = default;
};

struct Directory {
  std::vector<Entry> entries;                 // pointer tags excluded
  std::map<uint16_t, Directory> children;     // keyed by pointer tag

  const Entry* Find(uint16_t tag) const;
  void Set(Entry entry);
  bool operator==(const Directory&) const = default;
};

struct ExifPayload {
  ByteOrder byte_order = ByteOrder::kLittleEndian;
  Directory ifd0;
  std::optional<Directory> ifd1;
  std::vector<uint8_t> thumbnail;
};

// `tiff` starts at the TIFF header (after "Exif\0\0"). Throws
// CorruptExifSegment on any structural error.
ExifPayload ParsePayload(std::span<const uint8_t> tiff, ExifDiagnostics* diagnostics = nullptr);
// Deterministic layout: entries sorted by tag, data after each directory.
std::vector<uint8_t> SerializePayload(const ExifPayload& payload);

Entry MakeAscii(uint16_t tag, const std::string& text);
Entry MakeByte(uint16_t tag, std::span<const uint8_t> values);
Entry MakeRational(uint16_t tag, std::span<const std::pair<uint32_t, uint32_t>> values);
Entry MakeSRational(uint16_t tag, std::span<const std::pair<int32_t, int32_t>> values);

// Value accessors on the little-endian `data`.
uint32_t ReadU32(const Entry& entry, size_t index);
std::pair<int64_t, int64_t> ReadRational(const Entry& entry, size_t index);
std::string ReadAscii(const Entry& entry);

}  // namespace sfmval::tiff
