#include "sfmval/geotag/tiff.h"

#include <algorithm>
#include <set>

#include "sfmval/error.h"

namespace sfmval::tiff {
namespace {

constexpr int kMaxDirectoryDepth = 4;

[[noreturn]] void Corrupt(const std::string& detail) {
  Fail(ErrorCode::kCorruptExifSegment, detail);
}

// Element width used for byte swapping: rationals swap as two 32-bit halves.
size_t SwapUnit(uint16_t type) {
  switch (type) {
    case kShort: case kSShort: return 2;
    case kLong: case kSLong: case kFloat: case kRational: case kSRational: return 4;
    case kDouble: return 8;
    default: return 1;
  }
}

void SwapInPlace(std::vector<uint8_t>& data, uint16_t type) {
  const size_t unit = SwapUnit(type);
  if (unit == 1) return;
  for (size_t i = 0; i + unit <= data.size(); i += unit) {
    std::reverse(data.begin() + static_cast<std::ptrdiff_t>(i),
                 data.begin() + static_cast<std::ptrdiff_t>(i + unit));
  }
}

bool IsPointerTag(uint16_t tag, int depth_kind) {
  // depth_kind 0: IFD0, 1: Exif IFD.
  if (depth_kind == 0) return tag == kExifIfdPointer || tag == kGpsIfdPointer;
  if (depth_kind == 1) return tag == kInteropIfdPointer;
  return false;
}

class Reader {
 public:
  Reader(std::span<const uint8_t> data, ExifDiagnostics* diagnostics)
      : data_(data), diagnostics_(diagnostics) {}

  ByteOrder order() const { return order_; }

  uint32_t ReadHeader() {
    if (data_.size() < 8) Corrupt("TIFF header truncated");
    if (data_[0] == 'I' && data_[1] == 'I') {
      order_ = ByteOrder::kLittleEndian;
    } else if (data_[0] == 'M' && data_[1] == 'M') {
      order_ = ByteOrder::kBigEndian;
    } else {
      Corrupt("bad TIFF byte-order mark");
    }
    if (U16(2) != 42) Corrupt("bad TIFF magic");
    return U32(4);
  }

  uint16_t U16(uint64_t offset) const {
    Check(offset, 2);
    const uint8_t a = data_[offset], b = data_[offset + 1];
    return order_ == ByteOrder::kLittleEndian ? uint16_t(a | (b << 8)) : uint16_t((a << 8) | b);
  }

  uint32_t U32(uint64_t offset) const {
    Check(offset, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const int shift = order_ == ByteOrder::kLittleEndian ? 8 * i : 8 * (3 - i);
      v |= uint32_t(data_[offset + i]) << shift;
    }
    return v;
  }

  void Check(uint64_t offset, uint64_t size) const {
    if (offset > data_.size() || size > data_.size() - offset) {
      Corrupt("offset " + std::to_string(offset) + " + " + std::to_string(size) +
              " beyond segment end");
    }
  }

  // Returns the next-IFD offset.
  uint32_t ParseDirectory(uint32_t offset, int kind, int depth, Directory& out) {
    if (depth > kMaxDirectoryDepth) Corrupt("IFD nesting too deep");
    if (!visited_.insert(offset).second) Corrupt("IFD cycle at offset " + std::to_string(offset));
    const uint16_t count = U16(offset);
    Check(offset + 2, uint64_t(count) * 12 + 4);
    for (uint16_t i = 0; i < count; ++i) {
      const uint64_t e = offset + 2 + uint64_t(i) * 12;
      const uint16_t tag = U16(e);
      const uint16_t type = U16(e + 2);
      const uint32_t n = U32(e + 4);
      if (IsPointerTag(tag, kind)) {
        Directory child;
        const int child_kind = tag == kExifIfdPointer ? 1 : 2;
        ParseDirectory(U32(e + 8), child_kind, depth + 1, child);
        out.children[tag] = std::move(child);
        continue;
      }
      const size_t width = TypeSize(type);
      if (width == 0) {
        Warn("dropping tag 0x" + Hex(tag) + " with unknown type " + std::to_string(type));
        continue;
      }
      const uint64_t size = uint64_t(width) * n;
      const uint64_t at = size <= 4 ? e + 8 : U32(e + 8);
      Check(at, size);
      Entry entry;
      entry.tag = tag;
      entry.type = type;
      entry.count = n;
      entry.data.assign(data_.begin() + static_cast<std::ptrdiff_t>(at),
                        data_.begin() + static_cast<std::ptrdiff_t>(at + size));
      if (order_ == ByteOrder::kBigEndian) SwapInPlace(entry.data, type);
      out.entries.push_back(std::move(entry));
    }
    return U32(offset + 2 + uint64_t(count) * 12);
  }

  void Warn(const std::string& message) {
    if (diagnostics_ != nullptr) diagnostics_->warnings.push_back(message);
  }

  static std::string Hex(uint16_t v) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string s(4, '0');
    for (int i = 3; i >= 0; --i, v >>= 4) s[static_cast<size_t>(i)] = kHex[v & 0xF];
    return s;
  }

  std::span<const uint8_t> data() const { return data_; }

 private:
  std::span<const uint8_t> data_;
  ExifDiagnostics* diagnostics_;
  ByteOrder order_ = ByteOrder::kLittleEndian;
  std::set<uint32_t> visited_;
};

class Writer {
 public:
  explicit Writer(ByteOrder order) : order_(order) {}

  std::vector<uint8_t>& bytes() { return out_; }

  void Put16(uint16_t v) {
    if (order_ == ByteOrder::kLittleEndian) {
      out_.push_back(uint8_t(v));
      out_.push_back(uint8_t(v >> 8));
    } else {
      out_.push_back(uint8_t(v >> 8));
      out_.push_back(uint8_t(v));
    }
  }

  void Put32(uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      const int shift = order_ == ByteOrder::kLittleEndian ? 8 * i : 8 * (3 - i);
      out_.push_back(uint8_t(v >> shift));
    }
  }

  void Patch32(size_t at, uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      const int shift = order_ == ByteOrder::kLittleEndian ? 8 * i : 8 * (3 - i);
      out_[at + static_cast<size_t>(i)] = uint8_t(v >> shift);
    }
  }

  void Align() {
    if (out_.size() % 2 != 0) out_.push_back(0);
  }

  uint32_t Offset() const {
    if (out_.size() > 0xFFFFFFFFull) Fail(ErrorCode::kSegmentOverflow, "Exif payload too large");
    return static_cast<uint32_t>(out_.size());
  }

  struct Placed {
    uint32_t offset = 0;
    size_t next_field = 0;
  };

  // Writes `dir` and everything it references at the current position.
  // When `thumbnail` is given, the JPEGInterchangeFormat entry is pointed at
  // a copy of it.
  Placed WriteDirectory(const Directory& dir, const std::vector<uint8_t>* thumbnail) {
    std::vector<Entry> entries;
    entries.reserve(dir.entries.size() + dir.children.size());
    for (const Entry& e : dir.entries) entries.push_back(e);
    for (const auto& [tag, child] : dir.children) {
      Entry pointer;
      pointer.tag = tag;
      pointer.type = kLong;
      pointer.count = 1;
      pointer.data.assign(4, 0);
      entries.push_back(std::move(pointer));
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.tag < b.tag; });

    Align();
    Placed placed;
    placed.offset = Offset();
    Put16(static_cast<uint16_t>(entries.size()));
    std::vector<size_t> value_fields(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      Put16(e.tag);
      Put16(e.type);
      Put32(e.count);
      value_fields[i] = out_.size();
      std::vector<uint8_t> data = e.data;
      if (data.size() <= 4) {
        if (order_ == ByteOrder::kBigEndian) SwapInPlace(data, e.type);
        data.resize(4, 0);
        out_.insert(out_.end(), data.begin(), data.end());
      } else {
        Put32(0);
      }
    }
    placed.next_field = out_.size();
    Put32(0);

    for (size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      if (e.data.size() <= 4) continue;
      Align();
      Patch32(value_fields[i], Offset());
      std::vector<uint8_t> data = e.data;
      if (order_ == ByteOrder::kBigEndian) SwapInPlace(data, e.type);
      out_.insert(out_.end(), data.begin(), data.end());
    }
    for (size_t i = 0; i < entries.size(); ++i) {
      const auto child = dir.children.find(entries[i].tag);
      if (child == dir.children.end()) continue;
      const Placed sub = WriteDirectory(child->second, nullptr);
      Patch32(value_fields[i], sub.offset);
    }
    if (thumbnail != nullptr && !thumbnail->empty()) {
      for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].tag == kThumbnailOffset) {
          Align();
          Patch32(value_fields[i], Offset());
          out_.insert(out_.end(), thumbnail->begin(), thumbnail->end());
        } else if (entries[i].tag == kThumbnailLength && entries[i].type == kLong) {
          Patch32(value_fields[i], static_cast<uint32_t>(thumbnail->size()));
        }
      }
    }
    return placed;
  }

 private:
  ByteOrder order_;
  std::vector<uint8_t> out_;
};

Entry MakeRaw(uint16_t tag, uint16_t type, uint32_t count, std::vector<uint8_t> data) {
  Entry e;
  e.tag = tag;
  e.type = type;
  e.count = count;
  e.data = std::move(data);
  return e;
}

void AppendLe32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

}  // namespace

size_t TypeSize(uint16_t type) {
  switch (type) {
    case kByte: case kAscii: case kSByte: case kUndefined: return 1;
    case kShort: case kSShort: return 2;
    case kLong: case kSLong: case kFloat: return 4;
    case kRational: case kSRational: case kDouble: return 8;
    default: return 0;
  }
}

const Entry* Directory::Find(uint16_t tag) const {
  for (const Entry& e : entries)
    if (e.tag == tag) return &e;
  return nullptr;
}

void Directory::Set(Entry entry) {
  for (Entry& e : entries) {
    if (e.tag == entry.tag) {
      e = std::move(entry);
      return;
    }
  }
  entries.push_back(std::move(entry));
}

ExifPayload ParsePayload(std::span<const uint8_t> tiff, ExifDiagnostics* diagnostics) {
  Reader reader(tiff, diagnostics);
  ExifPayload payload;
  const uint32_t ifd0_offset = reader.ReadHeader();
  payload.byte_order = reader.order();
  const uint32_t ifd1_offset = reader.ParseDirectory(ifd0_offset, 0, 0, payload.ifd0);
  if (ifd1_offset != 0) {
    Directory ifd1;
    reader.ParseDirectory(ifd1_offset, 2, 0, ifd1);
    const Entry* offset = ifd1.Find(kThumbnailOffset);
    const Entry* length = ifd1.Find(kThumbnailLength);
    if (offset != nullptr && length != nullptr && offset->count == 1 && length->count == 1 &&
        (offset->type == kLong) && (length->type == kLong)) {
      const uint64_t at = ReadU32(*offset, 0), size = ReadU32(*length, 0);
      if (at <= tiff.size() && size <= tiff.size() - at) {
        payload.thumbnail.assign(tiff.begin() + static_cast<std::ptrdiff_t>(at),
                                 tiff.begin() + static_cast<std::ptrdiff_t>(at + size));
      } else {
        reader.Warn("thumbnail outside segment; dropped");
        std::erase_if(ifd1.entries, [](const Entry& e) {
          return e.tag == kThumbnailOffset || e.tag == kThumbnailLength;
        });
      }
    }
    payload.ifd1 = std::move(ifd1);
  }
  return payload;
}

std::vector<uint8_t> SerializePayload(const ExifPayload& payload) {
  Writer writer(payload.byte_order);
  auto& out = writer.bytes();
  if (payload.byte_order == ByteOrder::kLittleEndian) {
    out.push_back('I');
    out.push_back('I');
  } else {
    out.push_back('M');
    out.push_back('M');
  }
  writer.Put16(42);
  writer.Put32(8);
  const Writer::Placed ifd0 = writer.WriteDirectory(payload.ifd0, nullptr);
  if (payload.ifd1) {
    const Writer::Placed ifd1 = writer.WriteDirectory(*payload.ifd1, &payload.thumbnail);
    writer.Patch32(ifd0.next_field, ifd1.offset);
  }
  return std::move(out);
}

Entry MakeAscii(uint16_t tag, const std::string& text) {
  std::vector<uint8_t> data(text.begin(), text.end());
  data.push_back(0);
  const auto count = static_cast<uint32_t>(data.size());
  return MakeRaw(tag, kAscii, count, std::move(data));
}

Entry MakeByte(uint16_t tag, std::span<const uint8_t> values) {
  return MakeRaw(tag, kByte, static_cast<uint32_t>(values.size()),
                 std::vector<uint8_t>(values.begin(), values.end()));
}

Entry MakeRational(uint16_t tag, std::span<const std::pair<uint32_t, uint32_t>> values) {
  std::vector<uint8_t> data;
  for (const auto& [num, den] : values) {
    AppendLe32(data, num);
    AppendLe32(data, den);
  }
  return MakeRaw(tag, kRational, static_cast<uint32_t>(values.size()), std::move(data));
}

Entry MakeSRational(uint16_t tag, std::span<const std::pair<int32_t, int32_t>> values) {
  std::vector<uint8_t> data;
  for (const auto& [num, den] : values) {
    AppendLe32(data, static_cast<uint32_t>(num));
    AppendLe32(data, static_cast<uint32_t>(den));
  }
  return MakeRaw(tag, kSRational, static_cast<uint32_t>(values.size()), std::move(data));
}

uint32_t ReadU32(const Entry& entry, size_t index) {
  const size_t at = index * 4;
  if (at + 4 > entry.data.size()) Corrupt("value index out of range");
  return uint32_t(entry.data[at]) | uint32_t(entry.data[at + 1]) << 8 |
         uint32_t(entry.data[at + 2]) << 16 | uint32_t(entry.data[at + 3]) << 24;
}

std::pair<int64_t, int64_t> ReadRational(const Entry& entry, size_t index) {
  if (entry.type != kRational && entry.type != kSRational) Corrupt("expected a rational value");
  const uint32_t num = ReadU32(entry, 2 * index);
  const uint32_t den = ReadU32(entry, 2 * index + 1);
  if (entry.type == kSRational) {
    return {static_cast<int32_t>(num), static_cast<int32_t>(den)};
  }
  return {num, den};
}

std::string ReadAscii(const Entry& entry) {
  std::string text(entry.data.begin(), entry.data.end());
  if (const size_t nul = text.find('\0'); nul != std::string::npos) text.resize(nul);
  return text;
}

}  // namespace sfmval::tiff
