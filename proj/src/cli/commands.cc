#include "sfmval/cli/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sfmval/alignment/similarity.h"
#include "sfmval/error.h"
#include "sfmval/geotag/geotag.h"
#include "sfmval/metrics/report.h"
#include "sfmval/synth/fixtures.h"
#include "sfmval/trajectory/blender_export.h"
#include "sfmval/trajectory/canonical.h"
#include "sfmval/trajectory/colmap_images.h"
#include "sfmval/util/file.h"
#include "sfmval/util/text.h"

namespace sfmval {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

Trajectory ReadTrajectory(const fs::path& path, const std::string& format, EulerUnit unit,
                          std::ostream& err) {
  std::ifstream in = OpenInput(path);
  if (format == "canonical") return ReadCanonical(in);
  if (format == "blender") return ParseBlenderExport(in, unit);
  ParseDiagnostics diagnostics;
  Trajectory trajectory = ParseColmapImages(in, &diagnostics);
  for (const std::string& w : diagnostics.warnings) err << "warning: " << path.string() << ": " << w << '\n';
  return trajectory;
}

// Canonical files start with the magic word and Blender exports with their
// header; anything else is treated as COLMAP images.txt.
std::string DetectFormat(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.starts_with(kCanonicalMagic)) return "canonical";
    if (trimmed == kBlenderExportHeader) return "blender";
    return "colmap";
  }
  return "colmap";
}

Trajectory LoadAny(const fs::path& path, std::ostream& err) {
  return ReadTrajectory(path, DetectFormat(path), EulerUnit::kRadians, err);
}

KeyMode ToKeyMode(const std::string& key) {
  if (key == "name") return KeyMode::kByImageName;
  if (key == "order") return KeyMode::kByOrder;
  return KeyMode::kByFrameKey;
}

std::optional<uint64_t> SeedOverride() {
  const char* env = std::getenv("SFMVAL_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  const auto seed = ParseUint(Trim(env));
  if (!seed) throw UsageError("SFMVAL_SEED must be an unsigned integer, got '" + std::string(env) + "'");
  return seed;
}

template <typename Fn>
std::string Render(Fn&& fn) {
  std::ostringstream buffer;
  fn(buffer);
  return buffer.str();
}

Vector3d ToVector3(const std::vector<double>& v) { return Vector3d(v[0], v[1], v[2]); }

// Option storage shared by the subcommand callbacks.
struct Options {
  // convert
  std::string in, format, unit = "rad", out;
  // evaluate / align
  std::string gt, est, key = "frame", report, residuals, out_transform, out_traj;
  bool no_scale = false;
  // geotag
  std::string images, traj, pattern = "frame_%04d.jpg", geotag_report, byte_order;
  double lat0 = GeoRef{}.lat0, lon0 = GeoRef{}.lon0, alt0 = GeoRef{}.alt0;
  // synth
  std::string preset = "paper", synth_out, label = "custom", mode = "sideview";
  uint64_t seed = kDefaultFixtureSeed;
  CircuitParams circuit;
  std::vector<double> sigma = {1, 1, 1}, drift = {0, 0, 0};
  double dropout = 0, gauge_scale = 1;
  // compare
  std::string inputs, table;
  bool sorted = false;
};

int RunConvert(const Options& o, std::ostream& err) {
  const EulerUnit unit = o.unit == "deg" ? EulerUnit::kDegrees : EulerUnit::kRadians;
  const Trajectory trajectory = ReadTrajectory(o.in, o.format, unit, err);
  WriteCanonicalFile(trajectory, o.out);
  err << "converted " << trajectory.size() << " samples\n";
  return kExitOk;
}

int RunEvaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const Trajectory gt = LoadAny(o.gt, err);
  const Trajectory est = LoadAny(o.est, err);
  EvaluateOptions options;
  options.key_mode = ToKeyMode(o.key);
  options.horn.with_scale = !o.no_scale;
  const AlignmentReport report = Evaluate(gt, est, options);
  const std::string label = fs::path(o.est).stem().string();
  if (report.n_excluded_gt + report.n_excluded_est > 0) {
    err << "note: " << report.n_excluded_gt << " ground-truth and " << report.n_excluded_est
        << " estimated samples had no counterpart\n";
  }
  if (!o.report.empty()) {
    WriteFileAtomic(o.report, Render([&](std::ostream& s) {
                      s << kReportCsvHeader << '\n';
                      WriteReportCsvRow(s, label, report);
                    }));
  }
  if (!o.residuals.empty()) {
    WriteFileAtomic(o.residuals, Render([&](std::ostream& s) { WriteResidualTable(s, report); }));
  }
  WriteReportText(out, label, report);
  return kExitOk;
}

int RunAlign(const Options& o, std::ostream& out, std::ostream& err) {
  const Trajectory gt = LoadAny(o.gt, err);
  const Trajectory est = LoadAny(o.est, err);
  EvaluateOptions options;
  options.key_mode = ToKeyMode(o.key);
  options.horn.with_scale = !o.no_scale;
  const AlignmentReport report = Evaluate(gt, est, options);
  const std::string line = FormatTransform(report.transform);
  if (!o.out_transform.empty()) WriteFileAtomic(o.out_transform, line + "\n");
  if (!o.out_traj.empty()) WriteCanonicalFile(ApplySimilarity(report.transform, est), o.out_traj);
  out << line << '\n';
  return kExitOk;
}

int RunGeotag(const Options& o, std::ostream& out, std::ostream& err) {
  GeoRef ref;
  ref.lat0 = o.lat0;
  ref.lon0 = o.lon0;
  ref.alt0 = o.alt0;
  ValidateGeoRef(ref);
  const NamePattern pattern = NamePattern::Parse(o.pattern);
  const Trajectory trajectory = LoadAny(o.traj, err);
  GeotagOptions options;
  if (o.byte_order == "le") options.exif.byte_order = ByteOrder::kLittleEndian;
  if (o.byte_order == "be") options.exif.byte_order = ByteOrder::kBigEndian;
  const GeotagReport report = GeotagTrajectory(o.images, trajectory, ref, pattern, options);
  const std::string csv = Render([&](std::ostream& s) { WriteGeotagReportCsv(s, report); });
  if (!o.geotag_report.empty()) {
    WriteFileAtomic(o.geotag_report, csv);
  } else {
    out << csv;
  }
  for (const GeotagEntry& e : report.entries) {
    if (e.status != GeotagStatus::kWritten) {
      err << GeotagStatusName(e.status) << ": " << e.filename
          << (e.detail.empty() ? "" : " (" + e.detail + ")") << '\n';
    }
  }
  err << "written " << report.Count(GeotagStatus::kWritten) << ", missing "
      << report.Count(GeotagStatus::kMissingImage) << ", failed "
      << report.Count(GeotagStatus::kFailed) << '\n';
  return report.Count(GeotagStatus::kFailed) > 0 ? kExitDataError : kExitOk;
}

int RunSynth(const Options& o, std::ostream& out, std::ostream& err) {
  const uint64_t seed = SeedOverride().value_or(o.seed);
  const fs::path dir = o.synth_out;
  std::vector<FixtureEntry> entries;
  if (o.preset == "paper") {
    entries = ReferenceFixtures(dir, seed);
  } else {
    CircuitParams params = o.circuit;
    const auto mode = ParseOrientationMode(o.mode);
    if (!mode) throw UsageError("unknown --mode '" + o.mode + "'");
    params.orientation_mode = *mode;
    NoiseModel noise;
    noise.sigma = ToVector3(o.sigma);
    noise.drift_step = ToVector3(o.drift);
    noise.dropout = o.dropout;
    noise.seed = seed;
    if (o.gauge_scale != 1) {
      if (!(o.gauge_scale > 0)) Fail(ErrorCode::kInvalidParams, "--gauge-scale must be positive");
      SimilarityTransformd gauge;
      gauge.scale = o.gauge_scale;
      noise.gauge = gauge;
    }
    const Trajectory gt = GenerateCircuit(params);
    const Trajectory est = Perturb(gt, noise);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) Fail(ErrorCode::kIoError, "cannot create " + dir.string());
    FixtureEntry entry{o.label, o.label + ".gt.traj", o.label + ".est.traj", seed};
    WriteCanonicalFile(gt, dir / entry.gt_path);
    WriteCanonicalFile(est, dir / entry.est_path);
    entries.push_back(entry);
    WriteFileAtomic(dir / kManifestFilename, Render([&](std::ostream& s) { WriteManifest(s, entries); }));
  }
  for (const FixtureEntry& e : entries) out << e.label << '\n';
  err << "wrote " << entries.size() << " fixture pairs to " << dir.string() << '\n';
  return kExitOk;
}

int RunCompare(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream manifest = OpenInput(o.inputs);
  const std::vector<FixtureEntry> entries = ReadManifest(manifest);
  const fs::path base = fs::path(o.inputs).parent_path();
  EvaluateOptions options;
  options.key_mode = ToKeyMode(o.key);
  std::vector<ComparisonRow> rows;
  for (const FixtureEntry& e : entries) {
    const Trajectory gt = LoadAny(base / e.gt_path, err);
    const Trajectory est = LoadAny(base / e.est_path, err);
    rows.push_back({e.label, Evaluate(gt, est, options)});
  }
  const ComparisonTable table = Compare(std::move(rows), o.sorted);
  const std::string csv = Render([&](std::ostream& s) { WriteReportCsv(s, table.rows); });
  if (!o.table.empty()) WriteFileAtomic(o.table, csv);
  out << csv;
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Validate SfM camera trajectories against ground truth", "sfmval"};
  app.require_subcommand(1);
  Options o;
  const auto existing = CLI::ExistingFile;
  const auto key_check = CLI::IsMember({"frame", "name", "order"});

  auto* convert = app.add_subcommand("convert", "Convert a pose file to the canonical format");
  convert->add_option("--in", o.in, "Input file")->required()->check(existing);
  convert->add_option("--format", o.format, "Input format")
      ->required()
      ->check(CLI::IsMember({"colmap", "blender", "canonical"}));
  convert->add_option("--unit", o.unit, "Euler unit of Blender exports")
      ->check(CLI::IsMember({"rad", "deg"}))
      ->capture_default_str();
  convert->add_option("--out", o.out, "Output canonical file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Align an estimate to ground truth and report RMS");
  evaluate->add_option("--gt", o.gt, "Ground-truth trajectory")->required()->check(existing);
  evaluate->add_option("--est", o.est, "Estimated trajectory")->required()->check(existing);
  evaluate->add_option("--key", o.key, "Correspondence key")->check(key_check)->capture_default_str();
  evaluate->add_flag("--no-scale", o.no_scale, "Fit a rigid transform only");
  evaluate->add_option("--report", o.report, "Report CSV");
  evaluate->add_option("--residuals", o.residuals, "Residual table CSV");

  auto* align = app.add_subcommand("align", "Estimate the similarity mapping an estimate onto ground truth");
  align->add_option("--gt", o.gt, "Ground-truth trajectory")->required()->check(existing);
  align->add_option("--est", o.est, "Estimated trajectory")->required()->check(existing);
  align->add_option("--key", o.key, "Correspondence key")->check(key_check)->capture_default_str();
  align->add_flag("--no-scale", o.no_scale, "Fit a rigid transform only");
  align->add_option("--out-transform", o.out_transform, "Transform output");
  align->add_option("--out-traj", o.out_traj, "Aligned estimate, canonical format");

  auto* geotag = app.add_subcommand("geotag", "Write trajectory positions into image EXIF GPS tags");
  geotag->add_option("--images", o.images, "Image directory")->required();
  geotag->add_option("--traj", o.traj, "Trajectory")->required()->check(existing);
  geotag->add_option("--lat0", o.lat0, "Anchor latitude, degrees")->capture_default_str();
  geotag->add_option("--lon0", o.lon0, "Anchor longitude, degrees")->capture_default_str();
  geotag->add_option("--alt0", o.alt0, "Anchor altitude, meters")->capture_default_str();
  geotag->add_option("--pattern", o.pattern, "Image filename pattern")->capture_default_str();
  geotag->add_option("--report", o.geotag_report, "Per-image status CSV");
  geotag->add_option("--byte-order", o.byte_order, "TIFF byte order of rewritten EXIF")
      ->check(CLI::IsMember({"le", "be"}));

  auto* synth = app.add_subcommand("synth", "Generate synthetic fixture pairs");
  synth->add_option("--preset", o.preset, "paper or custom")
      ->check(CLI::IsMember({"paper", "custom"}))
      ->capture_default_str();
  synth->add_option("--out", o.synth_out, "Output directory")->required();
  synth->add_option("--seed", o.seed, "Base seed (SFMVAL_SEED overrides)")->capture_default_str();
  synth->add_option("--label", o.label, "Custom fixture label")->capture_default_str();
  synth->add_option("--mode", o.mode, "forward, sideview or tilted-sideview")->capture_default_str();
  synth->add_option("--extent-x", o.circuit.extent_x)->capture_default_str();
  synth->add_option("--extent-y", o.circuit.extent_y)->capture_default_str();
  synth->add_option("--frames", o.circuit.n_frames)->capture_default_str();
  synth->add_option("--height", o.circuit.height)->capture_default_str();
  synth->add_option("--tilt-deg", o.circuit.tilt_deg)->capture_default_str();
  synth->add_option("--corner-radius", o.circuit.corner_radius)->capture_default_str();
  synth->add_option("--sigma", o.sigma, "White noise sigma x,y,z")->expected(3)->delimiter(',');
  synth->add_option("--drift", o.drift, "Random-walk step sigma x,y,z")->expected(3)->delimiter(',');
  synth->add_option("--dropout", o.dropout)->capture_default_str();
  synth->add_option("--gauge-scale", o.gauge_scale)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Evaluate every pair of a manifest into one table");
  compare->add_option("--inputs", o.inputs, "Manifest CSV")->required()->check(existing);
  compare->add_option("--out", o.table, "Table CSV");
  compare->add_option("--key", o.key, "Correspondence key")->check(key_check)->capture_default_str();
  compare->add_flag("--sorted", o.sorted, "Sort rows by ascending rms_avg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*convert) return RunConvert(o, err);
    if (*evaluate) return RunEvaluate(o, out, err);
    if (*align) return RunAlign(o, out, err);
    if (*geotag) return RunGeotag(o, out, err);
    if (*synth) return RunSynth(o, out, err);
    if (*compare) return RunCompare(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

int RunCli(int argc, const char* const* argv) { return RunCli(argc, argv, std::cout, std::cerr); }

}  // namespace sfmval
