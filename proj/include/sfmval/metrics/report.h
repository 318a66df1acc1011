#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sfmval/alignment/horn.h"
#include "sfmval/trajectory/correspondence.h"
#include "sfmval/trajectory/trajectory.h"

namespace sfmval {

// sqrt(sum v_i^2 / n). Throws EmptyInput.
double Rms(std::span<const double> values);

struct EvaluateOptions {
  KeyMode key_mode = KeyMode::kByFrameKey;
  HornOptions horn;
};

struct AlignmentReport {
  size_t n_pairs = 0;
  // Samples without a counterpart, silently excluded from the fit.
  size_t n_excluded_gt = 0;
  size_t n_excluded_est = 0;
  SimilarityTransformd transform;
  double rms_x = 0;
  double rms_y = 0;
  double rms_z = 0;
  // Mean of the three per-axis values.
  double rms_avg = 0;
  double rms_3d = 0;
  // Largest absolute per-axis residual component.
  double max_abs_residual = 0;
  // Ground-truth frame key and residual y - ŷ for every pair, in
  // ground-truth order.
  std::vector<uint64_t> frame_keys;
  std::vector<Vector3d> residuals;
};

// Matches the trajectories, fits a similarity on camera positions mapping the
// estimate onto the ground truth, and measures residuals in the ground-truth
// frame. Propagates NoOverlap, TooFewPoints and DegenerateGeometry.
AlignmentReport Evaluate(const Trajectory& gt, const Trajectory& est,
                         const EvaluateOptions& options = {});

struct ComparisonRow {
  std::string label;
  AlignmentReport report;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  bool sorted = false;
};

// Stable ascending sort by rms_avg when `sort` is set. Throws EmptyInput.
ComparisonTable Compare(std::vector<ComparisonRow> reports, bool sort = true);

inline constexpr std::string_view kReportCsvHeader =
    "label,n_pairs,rms_x,rms_y,rms_z,rms_avg,rms_3d,max_abs_residual";

void WriteReportCsvRow(std::ostream& out, const std::string& label, const AlignmentReport& report);
void WriteReportCsv(std::ostream& out, std::span<const ComparisonRow> rows);
void WriteReportText(std::ostream& out, const std::string& label, const AlignmentReport& report);
// `frame_key,dx,dy,dz` per pair.
void WriteResidualTable(std::ostream& out, const AlignmentReport& report);

std::string CsvField(std::string_view text);

}  // namespace sfmval
