#include "sfmval/metrics/report.h"

#include <algorithm>
#include <cmath>

#include "sfmval/util/text.h"

namespace sfmval {

double Rms(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kEmptyInput, "RMS of an empty list");
  double sum = 0;
  for (const double v : values) sum += v * v;
  return std::sqrt(sum / static_cast<double>(values.size()));
}

AlignmentReport Evaluate(const Trajectory& gt, const Trajectory& est,
                         const EvaluateOptions& options) {
  const CorrespondenceSet matches = MatchCorrespondences(gt, est, options.key_mode);
  const auto n = static_cast<Eigen::Index>(matches.size());

  Matrix3X<double> source(3, n), target(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [i, j] = matches.pairs[static_cast<size_t>(k)];
    target.col(k) = gt.samples[i].position;
    source.col(k) = est.samples[j].position;
  }

  AlignmentReport report;
  report.n_pairs = matches.size();
  report.n_excluded_gt = gt.size() - matches.size();
  report.n_excluded_est = est.size() - matches.size();
  report.transform = HornAlign(source, target, options.horn);

  const Matrix3d R = report.transform.RotationMatrix();
  std::vector<double> dx, dy, dz;
  dx.reserve(matches.size());
  dy.reserve(matches.size());
  dz.reserve(matches.size());
  report.residuals.reserve(matches.size());
  report.frame_keys.reserve(matches.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector3d predicted =
        report.transform.scale * (R * source.col(k)) + report.transform.translation;
    const Vector3d residual = target.col(k) - predicted;
    report.residuals.push_back(residual);
    report.frame_keys.push_back(gt.samples[matches.pairs[static_cast<size_t>(k)].first].frame_key);
    dx.push_back(residual.x());
    dy.push_back(residual.y());
    dz.push_back(residual.z());
    report.max_abs_residual = std::max(report.max_abs_residual, residual.cwiseAbs().maxCoeff());
  }
  report.rms_x = Rms(dx);
  report.rms_y = Rms(dy);
  report.rms_z = Rms(dz);
  report.rms_avg = (report.rms_x + report.rms_y + report.rms_z) / 3.0;
  report.rms_3d = std::sqrt(report.rms_x * report.rms_x + report.rms_y * report.rms_y +
                            report.rms_z * report.rms_z);
  return report;
}

ComparisonTable Compare(std::vector<ComparisonRow> reports, bool sort) {
  if (reports.empty()) Fail(ErrorCode::kEmptyInput, "nothing to compare");
  ComparisonTable table;
  table.rows = std::move(reports);
  table.sorted = sort;
  if (sort) {
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) {
                       return a.report.rms_avg < b.report.rms_avg;
                     });
  }
  return table;
}

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void WriteReportCsvRow(std::ostream& out, const std::string& label, const AlignmentReport& report) {
  out << CsvField(label) << ',' << report.n_pairs << ',' << FormatDouble(report.rms_x) << ','
      << FormatDouble(report.rms_y) << ',' << FormatDouble(report.rms_z) << ','
      << FormatDouble(report.rms_avg) << ',' << FormatDouble(report.rms_3d) << ','
      << FormatDouble(report.max_abs_residual) << '\n';
}

void WriteReportCsv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << kReportCsvHeader << '\n';
  for (const ComparisonRow& row : rows) WriteReportCsvRow(out, row.label, row.report);
}

void WriteReportText(std::ostream& out, const std::string& label, const AlignmentReport& report) {
  const auto& T = report.transform;
  out << "label: " << label << '\n'
      << "n_pairs: " << report.n_pairs << '\n'
      << "n_excluded_gt: " << report.n_excluded_gt << '\n'
      << "n_excluded_est: " << report.n_excluded_est << '\n'
      << "scale: " << FormatDouble(T.scale) << '\n'
      << "rotation_wxyz: " << FormatDouble(T.rotation(0)) << ' ' << FormatDouble(T.rotation(1))
      << ' ' << FormatDouble(T.rotation(2)) << ' ' << FormatDouble(T.rotation(3)) << '\n'
      << "translation: " << FormatDouble(T.translation(0)) << ' '
      << FormatDouble(T.translation(1)) << ' ' << FormatDouble(T.translation(2)) << '\n'
      << "rms_x: " << FormatDouble(report.rms_x) << '\n'
      << "rms_y: " << FormatDouble(report.rms_y) << '\n'
      << "rms_z: " << FormatDouble(report.rms_z) << '\n'
      << "rms_avg: " << FormatDouble(report.rms_avg) << '\n'
      << "rms_3d: " << FormatDouble(report.rms_3d) << '\n'
      << "max_abs_residual: " << FormatDouble(report.max_abs_residual) << '\n';
}

void WriteResidualTable(std::ostream& out, const AlignmentReport& report) {
  out << "frame_key,dx,dy,dz\n";
  for (size_t i = 0; i < report.residuals.size(); ++i) {
    const Vector3d& r = report.residuals[i];
    out << report.frame_keys[i] << ',' << FormatDouble(r.x()) << ',' << FormatDouble(r.y()) << ','
        << FormatDouble(r.z()) << '\n';
  }
}

}  // namespace sfmval
