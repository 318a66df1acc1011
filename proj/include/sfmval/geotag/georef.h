#pragma once

#include <cstdint>
#include <string_view>

#include "sfmval/geometry/rotation.h"

namespace sfmval {

inline constexpr double kEarthEquatorialRadius = 6378137.0;  // meters, WGS84

// Anchor tying local scene meters to WGS84. `axis_map` takes local (x, y, z)
// to (east, north, up); it must be orthonormal.
struct GeoRef {
  double lat0 = 47.3769;
  double lon0 = 8.5417;
  double alt0 = 408.0;
  Matrix3d axis_map = Matrix3d::Identity();
};

struct GpsFix {
  double lat = 0;  // degrees, north positive
  double lon = 0;  // degrees, east positive
  double alt = 0;  // meters above sea level, may be negative
};

// Throws InvalidArgument for an anchor outside the tangent-plane domain.
void ValidateGeoRef(const GeoRef& ref);

// Equirectangular tangent plane around the anchor. Longitude is wrapped into
// (-180, 180]; a latitude beyond +-90 throws LatitudeOutOfRange.
GpsFix LocalToWgs84(const Vector3d& local, const GeoRef& ref);
Vector3d Wgs84ToLocal(const GpsFix& fix, const GeoRef& ref);

enum class GeoAxis { kLatitude, kLongitude };

// Unsigned degrees/minutes/seconds with the sign carried by the hemisphere
// reference, as stored in EXIF GPS tags. Seconds are in 1/10000 units.
struct DmsRational {
  static constexpr uint32_t kSecondsDenominator = 10000;

  uint32_t degrees = 0;
  uint32_t minutes = 0;
  uint32_t seconds_numerator = 0;
  char hemisphere = 'N';

  bool operator==(const DmsRational&) const = default;
};

// Throws OutOfRange beyond +-90 (latitude) or +-180 (longitude).
DmsRational DmsEncode(double decimal_degrees, GeoAxis axis);
double DmsDecode(const DmsRational& dms);

}  // namespace sfmval
