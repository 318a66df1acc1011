#include "sfmval/geotag/georef.h"

#include <cmath>
#include <numbers>
#include <string>

#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMaxAnchorLatitude = 89.9;

double WrapLongitude(double lon) {
  if (lon > -180.0 && lon <= 180.0) return lon;
  double wrapped = std::fmod(lon + 180.0, 360.0);
  if (wrapped <= 0) wrapped += 360.0;
  return wrapped - 180.0;
}

}  // namespace

void ValidateGeoRef(const GeoRef& ref) {
  if (!std::isfinite(ref.lat0) || std::abs(ref.lat0) >= kMaxAnchorLatitude) {
    Fail(ErrorCode::kInvalidArgument,
         "anchor latitude " + FormatDouble(ref.lat0) + " outside (-89.9, 89.9)");
  }
  if (!std::isfinite(ref.lon0) || std::abs(ref.lon0) > 180.0) {
    Fail(ErrorCode::kInvalidArgument, "anchor longitude " + FormatDouble(ref.lon0) + " outside [-180, 180]");
  }
  if (!std::isfinite(ref.alt0)) Fail(ErrorCode::kInvalidArgument, "anchor altitude not finite");
  if (!ref.axis_map.allFinite() ||
      (ref.axis_map.transpose() * ref.axis_map - Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    Fail(ErrorCode::kInvalidArgument, "axis map is not orthonormal");
  }
}

GpsFix LocalToWgs84(const Vector3d& local, const GeoRef& ref) {
  ValidateGeoRef(ref);
  if (!local.allFinite()) Fail(ErrorCode::kNonFinite, "local position not finite");
  const Vector3d enu = ref.axis_map * local;
  GpsFix fix;
  fix.lat = ref.lat0 + enu.y() / kEarthEquatorialRadius * kRadToDeg;
  if (std::abs(fix.lat) > 90.0) {
    Fail(ErrorCode::kLatitudeOutOfRange, "latitude " + FormatDouble(fix.lat) + " beyond the pole");
  }
  fix.lon = WrapLongitude(
      ref.lon0 + enu.x() / (kEarthEquatorialRadius * std::cos(ref.lat0 * kDegToRad)) * kRadToDeg);
  fix.alt = ref.alt0 + enu.z();
  return fix;
}

Vector3d Wgs84ToLocal(const GpsFix& fix, const GeoRef& ref) {
  ValidateGeoRef(ref);
  const double dlon = WrapLongitude(fix.lon - ref.lon0);
  const Vector3d enu(
      dlon * kDegToRad * kEarthEquatorialRadius * std::cos(ref.lat0 * kDegToRad),
      (fix.lat - ref.lat0) * kDegToRad * kEarthEquatorialRadius, fix.alt - ref.alt0);
  return ref.axis_map.transpose() * enu;
}

DmsRational DmsEncode(double decimal_degrees, GeoAxis axis) {
  const double limit = axis == GeoAxis::kLatitude ? 90.0 : 180.0;
  if (!(std::abs(decimal_degrees) <= limit)) {
    Fail(ErrorCode::kOutOfRange, FormatDouble(decimal_degrees) + " degrees outside +-" +
                                     FormatDouble(limit));
  }
  // Round once in units of 1/10000 arc-second, then split, so carries into
  // minutes and degrees come out right.
  constexpr uint64_t kUnitsPerMinute = 60ull * DmsRational::kSecondsDenominator;
  constexpr uint64_t kUnitsPerDegree = 60ull * kUnitsPerMinute;
  const auto total =
      static_cast<uint64_t>(std::llround(std::abs(decimal_degrees) * double(kUnitsPerDegree)));
  DmsRational dms;
  dms.degrees = static_cast<uint32_t>(total / kUnitsPerDegree);
  dms.minutes = static_cast<uint32_t>((total % kUnitsPerDegree) / kUnitsPerMinute);
  dms.seconds_numerator = static_cast<uint32_t>(total % kUnitsPerMinute);
  const bool negative = decimal_degrees < 0;
  if (axis == GeoAxis::kLatitude) {
    dms.hemisphere = negative ? 'S' : 'N';
  } else {
    dms.hemisphere = negative ? 'W' : 'E';
  }
  return dms;
}

double DmsDecode(const DmsRational& dms) {
  double sign = 1.0;
  switch (dms.hemisphere) {
    case 'N': case 'E': break;
    case 'S': case 'W': sign = -1.0; break;
    default:
      Fail(ErrorCode::kInvalidArgument, std::string("unknown hemisphere '") + dms.hemisphere + "'");
  }
  const double magnitude =
      dms.degrees + dms.minutes / 60.0 +
      dms.seconds_numerator / (3600.0 * DmsRational::kSecondsDenominator);
  return sign * magnitude;
}

}  // namespace sfmval
