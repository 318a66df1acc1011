#pragma once

#include <istream>
#include <ostream>

#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

inline constexpr std::string_view kBlenderExportHeader = "frame,x,y,z,rx,ry,rz";

// CSV with header `frame,x,y,z,rx,ry,rz`, one record per rendered frame.
// Positions are camera centers; (rx, ry, rz) are XYZ Euler angles of the
// camera-to-world rotation in the given unit. LF and CRLF both accepted.
Trajectory ParseBlenderExport(std::istream& in, EulerUnit unit);

void WriteBlenderExport(const Trajectory& trajectory, std::ostream& out, EulerUnit unit);

}  // namespace sfmval
