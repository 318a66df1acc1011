#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "sfmval/geotag/exif_gps.h"
#include "sfmval/geotag/geotag.h"
#include "sfmval/geotag/georef.h"
#include "sfmval/geotag/tiff.h"
#include "sfmval/util/file.h"
#include "support/expect_error.h"
#include "support/oracles.h"

namespace sfmval {
namespace {

namespace fs = std::filesystem;

std::vector<uint8_t> LoadFixture(const std::string& name) {
  const std::string bytes = ReadFileBytes(fs::path(SFMVAL_TEST_DATA_DIR) / name);
  return {bytes.begin(), bytes.end()};
}

std::vector<uint8_t> ScanBytes(const std::vector<uint8_t>& jpeg) {
  return {jpeg.begin() + static_cast<std::ptrdiff_t>(ScanDataOffset(jpeg)), jpeg.end()};
}

// Finds an IFD0 ASCII entry by walking the parsed payload of the APP1.
std::optional<std::string> Ifd0Ascii(const std::vector<uint8_t>& jpeg, uint16_t tag) {
  size_t pos = 2;
  while (pos + 4 < jpeg.size() && jpeg[pos] == 0xFF) {
    const uint8_t marker = jpeg[pos + 1];
    const size_t length = size_t(jpeg[pos + 2]) << 8 | jpeg[pos + 3];
    if (marker == 0xE1 && std::equal(jpeg.begin() + pos + 4, jpeg.begin() + pos + 8, "Exif")) {
      const auto payload = tiff::ParsePayload(std::span(jpeg).subspan(pos + 10, length - 8));
      const tiff::Entry* entry = payload.ifd0.Find(tag);
      if (entry == nullptr) return std::nullopt;
      return tiff::ReadAscii(*entry);
    }
    pos += 2 + length;
  }
  return std::nullopt;
}

TEST(LocalToWgs84, OriginMapsToAnchor) {
  const GeoRef ref;
  const GpsFix fix = LocalToWgs84(Vector3d::Zero(), ref);
  EXPECT_EQ(fix.lat, ref.lat0);
  EXPECT_EQ(fix.lon, ref.lon0);
  EXPECT_EQ(fix.alt, ref.alt0);
}

TEST(LocalToWgs84, OneDegreeNorthAndWest) {
  GeoRef ref;
  ref.lat0 = 0;
  ref.lon0 = 0;
  ref.alt0 = 0;
  const double one_degree = kEarthEquatorialRadius * M_PI / 180;
  EXPECT_NEAR(LocalToWgs84(Vector3d(0, one_degree, 0), ref).lat, 1.0, 1e-12);
  EXPECT_NEAR(LocalToWgs84(Vector3d(-one_degree, 0, 0), ref).lon, -1.0, 1e-12);
  ref.lon0 = 179.5;
  EXPECT_NEAR(LocalToWgs84(Vector3d(one_degree, 0, 0), ref).lon, -179.5, 1e-9);
}

TEST(LocalToWgs84, RoundTripAndErrors) {
  const GeoRef ref;
  const Vector3d p(123.5, -77.25, 12);
  EXPECT_LE((Wgs84ToLocal(LocalToWgs84(p, ref), ref) - p).norm(), 1e-6);
  EXPECT_SFM_ERROR(LocalToWgs84(Vector3d(0, 2e7, 0), ref), ErrorCode::kLatitudeOutOfRange);
  GeoRef polar;
  polar.lat0 = 90;
  EXPECT_SFM_ERROR(ValidateGeoRef(polar), ErrorCode::kInvalidArgument);
}

TEST(LocalToWgs84, AxisMapRotatesIntoEastNorthUp) {
  GeoRef ref;
  ref.axis_map << 0, 1, 0, -1, 0, 0, 0, 0, 1;  // local x is south
  const GpsFix fix = LocalToWgs84(Vector3d(1000, 0, 0), ref);
  EXPECT_LT(fix.lat, ref.lat0);
  EXPECT_NEAR(fix.lon, ref.lon0, 1e-12);
}

TEST(Dms, Examples) {
  EXPECT_EQ(DmsEncode(0.0, GeoAxis::kLatitude), (DmsRational{0, 0, 0, 'N'}));
  EXPECT_EQ(DmsEncode(47.3769, GeoAxis::kLatitude), (DmsRational{47, 22, 368400, 'N'}));
  const DmsRational west = DmsEncode(-8.5, GeoAxis::kLongitude);
  EXPECT_EQ(west, (DmsRational{8, 30, 0, 'W'}));
  EXPECT_EQ(DmsDecode(west), -8.5);
  EXPECT_EQ(DmsEncode(-33.8688, GeoAxis::kLatitude).hemisphere, 'S');
  EXPECT_EQ(DmsEncode(0.0, GeoAxis::kLongitude).hemisphere, 'E');
}

TEST(Dms, CarriesIntoMinutesAndDegrees) {
  // 59.99999999 minutes rounds up to a whole degree.
  EXPECT_EQ(DmsEncode(10.999999999, GeoAxis::kLatitude), (DmsRational{11, 0, 0, 'N'}));
  EXPECT_EQ(DmsEncode(-179.9999999999, GeoAxis::kLongitude), (DmsRational{180, 0, 0, 'W'}));
}

TEST(Dms, RangeErrors) {
  EXPECT_SFM_ERROR(DmsEncode(90.5, GeoAxis::kLatitude), ErrorCode::kOutOfRange);
  EXPECT_SFM_ERROR(DmsEncode(-180.5, GeoAxis::kLongitude), ErrorCode::kOutOfRange);
  EXPECT_SFM_ERROR(DmsEncode(NAN, GeoAxis::kLongitude), ErrorCode::kOutOfRange);
  EXPECT_SFM_ERROR(DmsDecode(DmsRational{1, 0, 0, 'Q'}), ErrorCode::kInvalidArgument);
}

TEST(Dms, RandomRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90);
  for (int i = 0; i < 10000; ++i) {
    const double v = lat(rng);
    EXPECT_NEAR(DmsDecode(DmsEncode(v, GeoAxis::kLatitude)), v, 1.5e-8);
  }
}

TEST(WriteGpsExif, PlainJpegAtOrigin) {
  const std::vector<uint8_t> plain = LoadFixture("plain.jpg");
  EXPECT_FALSE(ReadGpsExif(plain).has_value());
  const std::vector<uint8_t> tagged = WriteGpsExif(plain, GpsFix{0, 0, 0});
  const auto fix = ReadGpsExif(tagged);
  ASSERT_TRUE(fix.has_value());
  EXPECT_NEAR(fix->lat, 0, 1e-7);
  EXPECT_NEAR(fix->lon, 0, 1e-7);
  EXPECT_NEAR(fix->alt, 0, 1e-3);
  EXPECT_EQ(ScanBytes(tagged), ScanBytes(plain));
  // The new APP1 follows the JFIF APP0.
  EXPECT_EQ(tagged[2], 0xFF);
  EXPECT_EQ(tagged[3], 0xE0);
}

TEST(WriteGpsExif, PreservesCameraMake) {
  const std::vector<uint8_t> original = LoadFixture("camera_make.jpg");
  EXPECT_EQ(Ifd0Ascii(original, 0x010F), "SfmvalTestCam");
  EXPECT_EQ(ReadExifByteOrder(original), ByteOrder::kBigEndian);

  const std::vector<uint8_t> tagged = WriteGpsExif(original, GpsFix{47.3769, 8.5417, 408});
  EXPECT_EQ(Ifd0Ascii(tagged, 0x010F), "SfmvalTestCam");
  EXPECT_EQ(Ifd0Ascii(tagged, 0x0110), "Model 7");
  EXPECT_EQ(ReadExifByteOrder(tagged), ByteOrder::kBigEndian);
  const auto fix = ReadGpsExif(tagged);
  ASSERT_TRUE(fix.has_value());
  EXPECT_NEAR(fix->lat, 47.3769, 1e-7);
  EXPECT_NEAR(fix->lon, 8.5417, 1e-7);
  EXPECT_NEAR(fix->alt, 408, 1e-3);
  EXPECT_EQ(ScanBytes(tagged), ScanBytes(original));
}

TEST(WriteGpsExif, SouthWestBelowSeaLevel) {
  const std::vector<uint8_t> tagged = WriteGpsExif(LoadFixture("plain.jpg"), GpsFix{-33.8688, -70.0, -10});
  const auto fix = ReadGpsExif(tagged);
  ASSERT_TRUE(fix.has_value());
  EXPECT_NEAR(fix->lat, -33.8688, 1e-7);
  EXPECT_NEAR(fix->lon, -70.0, 1e-7);
  EXPECT_NEAR(fix->alt, -10, 1e-3);

  const std::string bytes(tagged.begin(), tagged.end());
  const size_t tiff_start = bytes.find("Exif") + 6;
  const auto payload = tiff::ParsePayload(std::span(tagged).subspan(tiff_start));
  const tiff::Directory& gps = payload.ifd0.children.at(tiff::kGpsIfdPointer);
  EXPECT_EQ(tiff::ReadAscii(*gps.Find(1)), "S");
  EXPECT_EQ(tiff::ReadAscii(*gps.Find(3)), "W");
  EXPECT_EQ(gps.Find(5)->data, std::vector<uint8_t>{1});
  EXPECT_EQ(gps.Find(0)->data, (std::vector<uint8_t>{2, 3, 0, 0}));
}

TEST(WriteGpsExif, BothByteOrdersGiveSameFix) {
  const std::vector<uint8_t> plain = LoadFixture("camera_make.jpg");
  const GpsFix fix{12.345678, -98.7654321, 1234.5};
  ExifWriteOptions le, be;
  le.byte_order = ByteOrder::kLittleEndian;
  be.byte_order = ByteOrder::kBigEndian;
  const auto a = WriteGpsExif(plain, fix, le);
  const auto b = WriteGpsExif(plain, fix, be);
  EXPECT_EQ(ReadExifByteOrder(a), ByteOrder::kLittleEndian);
  EXPECT_EQ(ReadExifByteOrder(b), ByteOrder::kBigEndian);
  EXPECT_NE(a, b);
  const auto fa = ReadGpsExif(a), fb = ReadGpsExif(b);
  ASSERT_TRUE(fa && fb);
  EXPECT_EQ(fa->lat, fb->lat);
  EXPECT_EQ(fa->lon, fb->lon);
  EXPECT_EQ(fa->alt, fb->alt);
  EXPECT_EQ(Ifd0Ascii(a, 0x010F), "SfmvalTestCam");
}

TEST(WriteGpsExif, RewriteIsIdempotent) {
  const std::vector<uint8_t> plain = LoadFixture("camera_make.jpg");
  const GpsFix fix{1, 2, 3};
  const auto once = WriteGpsExif(plain, fix);
  EXPECT_EQ(WriteGpsExif(once, fix), once);
}

TEST(WriteGpsExif, NegativeStoredRationalCombinesWithRef) {
  // A foreign writer stored the latitude as SRATIONAL -10 with ref 'S'.
  tiff::ExifPayload payload;
  tiff::Directory gps;
  const std::array<std::pair<int32_t, int32_t>, 3> lat = {{{-10, 1}, {0, 1}, {0, 1}}};
  const std::array<std::pair<uint32_t, uint32_t>, 3> lon = {{{5, 1}, {0, 1}, {0, 1}}};
  gps.Set(tiff::MakeAscii(1, "S"));
  gps.Set(tiff::MakeSRational(2, lat));
  gps.Set(tiff::MakeAscii(3, "E"));
  gps.Set(tiff::MakeRational(4, lon));
  payload.ifd0.children[tiff::kGpsIfdPointer] = gps;
  const std::vector<uint8_t> tiff_bytes = tiff::SerializePayload(payload);
  std::vector<uint8_t> jpeg = {0xFF, 0xD8, 0xFF, 0xE1};
  const size_t length = tiff_bytes.size() + 8;
  jpeg.push_back(static_cast<uint8_t>(length >> 8));
  jpeg.push_back(static_cast<uint8_t>(length & 0xFF));
  for (const char c : std::string("Exif\0\0", 6)) jpeg.push_back(static_cast<uint8_t>(c));
  jpeg.insert(jpeg.end(), tiff_bytes.begin(), tiff_bytes.end());
  jpeg.insert(jpeg.end(), {0xFF, 0xD9});

  ExifDiagnostics diagnostics;
  const auto fix = ReadGpsExif(jpeg, &diagnostics);
  ASSERT_TRUE(fix.has_value());
  EXPECT_EQ(fix->lat, 10);
  EXPECT_EQ(fix->lon, 5);
  EXPECT_EQ(diagnostics.warnings.size(), 1u);
}

TEST(WriteGpsExif, Errors) {
  const std::vector<uint8_t> not_jpeg = {'P', 'N', 'G'};
  EXPECT_SFM_ERROR(WriteGpsExif(not_jpeg, GpsFix{}), ErrorCode::kNotAJpeg);
  EXPECT_SFM_ERROR(ReadGpsExif(not_jpeg), ErrorCode::kNotAJpeg);

  std::vector<uint8_t> corrupt = {0xFF, 0xD8, 0xFF, 0xE1, 0x00, 0x0E, 'E', 'x', 'i', 'f', 0, 0,
                                  'I',  'I',  42,   0,    0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xD9};
  EXPECT_SFM_ERROR(ReadGpsExif(corrupt), ErrorCode::kCorruptExifSegment);
  EXPECT_SFM_ERROR(WriteGpsExif(corrupt, GpsFix{}), ErrorCode::kCorruptExifSegment);

  // An IFD0 holding a 65000-byte comment leaves no room for the GPS block.
  tiff::ExifPayload big;
  big.ifd0.Set(tiff::MakeAscii(0x010E, std::string(65500, 'x')));
  const std::vector<uint8_t> tiff_bytes = tiff::SerializePayload(big);
  std::vector<uint8_t> jpeg = {0xFF, 0xD8, 0xFF, 0xE1};
  const size_t length = tiff_bytes.size() + 8;
  jpeg.push_back(static_cast<uint8_t>(length >> 8));
  jpeg.push_back(static_cast<uint8_t>(length & 0xFF));
  for (const char c : std::string("Exif\0\0", 6)) jpeg.push_back(static_cast<uint8_t>(c));
  jpeg.insert(jpeg.end(), tiff_bytes.begin(), tiff_bytes.end());
  jpeg.insert(jpeg.end(), {0xFF, 0xD9});
  EXPECT_SFM_ERROR(WriteGpsExif(jpeg, GpsFix{}), ErrorCode::kSegmentOverflow);
}

TEST(NamePattern, Formats) {
  EXPECT_EQ(NamePattern::Parse("frame_%04d.jpg").Format(42), "frame_0042.jpg");
  EXPECT_EQ(NamePattern::Parse("img%d.JPG").Format(7), "img7.JPG");
  EXPECT_EQ(NamePattern::Parse("100%%_%02d.jpg").Format(123), "100%_123.jpg");
  EXPECT_ANY_THROW(NamePattern::Parse("frame.jpg"));
  EXPECT_ANY_THROW(NamePattern::Parse("%d_%d.jpg"));
}

Trajectory FiveFrames() {
  Trajectory t;
  for (int i = 1; i <= 5; ++i) {
    PoseSample s;
    s.frame_key = static_cast<uint64_t>(i);
    s.position = Vector3d(10.0 * i, -3.0 * i, 2);
    t.samples.push_back(s);
  }
  return t;
}

TEST(GeotagTrajectory, FourOfFiveImages) {
  const fs::path dir = oracle::ScratchDir("geotag_four");
  const std::string plain = ReadFileBytes(fs::path(SFMVAL_TEST_DATA_DIR) / "plain.jpg");
  for (const int i : {1, 2, 4, 5}) WriteFileAtomic(dir / ("frame_000" + std::to_string(i) + ".jpg"), plain);

  const GeoRef ref;
  const GeotagReport report = GeotagTrajectory(dir, FiveFrames(), ref, NamePattern::Parse("frame_%04d.jpg"));
  ASSERT_EQ(report.entries.size(), 5u);
  EXPECT_EQ(report.Count(GeotagStatus::kWritten), 4u);
  EXPECT_EQ(report.Count(GeotagStatus::kMissingImage), 1u);
  EXPECT_EQ(report.entries[2].frame_key, 3u);
  EXPECT_EQ(report.entries[2].status, GeotagStatus::kMissingImage);

  const std::string bytes = ReadFileBytes(dir / "frame_0004.jpg");
  const auto fix = ReadGpsExif(std::span(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()));
  ASSERT_TRUE(fix.has_value());
  const GpsFix expected = LocalToWgs84(Vector3d(40, -12, 2), ref);
  EXPECT_NEAR(fix->lat, expected.lat, 1e-7);
  EXPECT_NEAR(fix->lon, expected.lon, 1e-7);
  EXPECT_NEAR(fix->alt, expected.alt, 1e-3);
}

TEST(GeotagTrajectory, IdempotentAndEmpty) {
  const fs::path dir = oracle::ScratchDir("geotag_idem");
  const std::string plain = ReadFileBytes(fs::path(SFMVAL_TEST_DATA_DIR) / "camera_make.jpg");
  for (int i = 1; i <= 5; ++i) WriteFileAtomic(dir / ("frame_000" + std::to_string(i) + ".jpg"), plain);
  const NamePattern pattern = NamePattern::Parse("frame_%04d.jpg");
  GeotagTrajectory(dir, FiveFrames(), GeoRef{}, pattern);
  const std::string first = ReadFileBytes(dir / "frame_0003.jpg");
  GeotagTrajectory(dir, FiveFrames(), GeoRef{}, pattern);
  EXPECT_EQ(ReadFileBytes(dir / "frame_0003.jpg"), first);
  EXPECT_TRUE(GeotagTrajectory(dir, Trajectory{}, GeoRef{}, pattern).entries.empty());
  EXPECT_SFM_ERROR(GeotagTrajectory(dir / "nope", FiveFrames(), GeoRef{}, pattern), ErrorCode::kIoError);
}

TEST(GeotagTrajectory, NonJpegIsReportedAsFailed) {
  const fs::path dir = oracle::ScratchDir("geotag_failed");
  WriteFileAtomic(dir / "frame_0001.jpg", "not a jpeg");
  Trajectory t = FiveFrames();
  t.samples.resize(1);
  const GeotagReport report = GeotagTrajectory(dir, t, GeoRef{}, NamePattern::Parse("frame_%04d.jpg"));
  ASSERT_EQ(report.entries.size(), 1u);
  EXPECT_EQ(report.entries[0].status, GeotagStatus::kFailed);
  EXPECT_NE(report.entries[0].detail.find("NotAJpeg"), std::string::npos);
  EXPECT_EQ(ReadFileBytes(dir / "frame_0001.jpg"), "not a jpeg");
}

}  // namespace
}  // namespace sfmval
