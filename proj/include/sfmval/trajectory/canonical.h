#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

// Canonical trajectory interchange format:
//
//   sfmval-trajectory v1
//   @frame_label blender-world
//   @source BlenderExport
//   @euler_unit Radians
//   <frame_key> <image_name|-> <x> <y> <z> <qw> <qx> <qy> <qz>
//   ...
//
// Doubles are written with 17 significant digits so values round-trip
// bit-exactly. Names are percent-escaped for whitespace and '%'; a literal
// "-" name is written as "%2D". Unknown '@' keys and trailing extra fields on
// sample lines are ignored when reading.
inline constexpr std::string_view kCanonicalMagic = "sfmval-trajectory";
inline constexpr std::string_view kCanonicalVersion = "v1";

void WriteCanonical(const Trajectory& trajectory, std::ostream& out);
std::string ToCanonicalString(const Trajectory& trajectory);
Trajectory ReadCanonical(std::istream& in);

void WriteCanonicalFile(const Trajectory& trajectory, const std::filesystem::path& path);
Trajectory ReadCanonicalFile(const std::filesystem::path& path);

}  // namespace sfmval
