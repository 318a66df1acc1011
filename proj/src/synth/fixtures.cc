#include "sfmval/synth/fixtures.h"

#include <sstream>

#include "sfmval/synth/random.h"
#include "sfmval/trajectory/canonical.h"
#include "sfmval/util/file.h"
#include "sfmval/util/text.h"

namespace sfmval {
namespace {

// SfM reconstructions live in an arbitrary similarity frame.
SimilarityTransformd ReconstructionGauge() {
  SimilarityTransformd gauge;
  gauge.scale = 0.25;
  gauge.rotation = EulerXYZToQuaternion<double>({0.3, -0.2, 1.1});
  gauge.translation = Vector3d(12.5, -7.25, 3.0);
  return gauge;
}

FixturePreset MakePreset(std::string label, OrientationMode mode, Vector3d sigma) {
  FixturePreset preset;
  preset.label = std::move(label);
  preset.mode = mode;
  preset.noise.sigma = sigma;
  preset.noise.drift_step = Vector3d(0.002, 0.002, 0.0005);
  preset.noise.gauge = ReconstructionGauge();
  preset.noise.dropout = 0.003;
  return preset;
}

}  // namespace

std::vector<FixturePreset> ReferencePresets() {
  using M = OrientationMode;
  return {
      MakePreset("nontilted-sequential", M::kSideview, Vector3d(1.00, 1.05, 0.22)),
      MakePreset("tilted-sequential", M::kTiltedSideview, Vector3d(0.88, 0.92, 0.18)),
      MakePreset("nontilted-spatial-gps", M::kSideview, Vector3d(1.20, 1.25, 0.24)),
      MakePreset("tilted-spatial-gps", M::kTiltedSideview, Vector3d(1.10, 1.15, 0.19)),
      // Fewer but better matches: x error drops back for the non-tilted
      // camera, the tilted one deteriorates slightly.
      MakePreset("nontilted-spatial-gps-fewer-features", M::kSideview, Vector3d(1.14, 1.30, 0.24)),
      MakePreset("tilted-spatial-gps-fewer-features", M::kTiltedSideview, Vector3d(1.12, 1.16, 0.20)),
  };
}

std::vector<FixtureEntry> ReferenceFixtures(const std::filesystem::path& out_dir,
                                             uint64_t base_seed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    Fail(ErrorCode::kIoError, "cannot create " + out_dir.string());
  }

  std::vector<FixtureEntry> entries;
  const std::vector<FixturePreset> presets = ReferencePresets();
  for (size_t i = 0; i < presets.size(); ++i) {
    const FixturePreset& preset = presets[i];
    CircuitParams params;
    params.orientation_mode = preset.mode;
    const Trajectory gt = GenerateCircuit(params);
    NoiseModel noise = preset.noise;
    noise.seed = base_seed + i;
    const Trajectory est = Perturb(gt, noise);

    FixtureEntry entry;
    entry.label = preset.label;
    entry.gt_path = preset.label + ".gt.traj";
    entry.est_path = preset.label + ".est.traj";
    entry.seed = noise.seed;
    WriteCanonicalFile(gt, out_dir / entry.gt_path);
    WriteCanonicalFile(est, out_dir / entry.est_path);
    entries.push_back(std::move(entry));
  }
  std::ostringstream manifest;
  WriteManifest(manifest, entries);
  WriteFileAtomic(out_dir / kManifestFilename, manifest.str());
  return entries;
}

void WriteManifest(std::ostream& out, const std::vector<FixtureEntry>& entries) {
  out << kManifestHeader << '\n';
  for (const FixtureEntry& e : entries) {
    out << e.label << ',' << e.gt_path << ',' << e.est_path << ',' << e.seed << '\n';
  }
}

std::vector<FixtureEntry> ReadManifest(std::istream& in) {
  std::vector<FixtureEntry> entries;
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = Split(trimmed, ',');
    if (!have_header) {
      have_header = true;
      if (fields.size() >= 3 && Trim(fields[0]) == "label") continue;
    }
    if (fields.size() != 3 && fields.size() != 4) {
      Fail(ErrorCode::kMalformedRecord,
           "manifest line " + std::to_string(line_no) + ": expected label,gt_path,est_path[,seed]");
    }
    FixtureEntry entry;
    entry.label = std::string(Trim(fields[0]));
    entry.gt_path = std::string(Trim(fields[1]));
    entry.est_path = std::string(Trim(fields[2]));
    if (fields.size() == 4 && !Trim(fields[3]).empty()) {
      const auto seed = ParseUint(Trim(fields[3]));
      if (!seed) {
        Fail(ErrorCode::kMalformedRecord, "manifest line " + std::to_string(line_no) + ": bad seed");
      }
      entry.seed = *seed;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

ColmapFixtureStreambuf::ColmapFixtureStreambuf(const Trajectory& trajectory,
                                               size_t points_per_image, uint64_t seed)
    : trajectory_(trajectory), points_per_image_(points_per_image) {
  CounterRng rng(seed, 7);
  constexpr size_t kPoolSize = 997;
  triplet_pool_.reserve(kPoolSize);
  for (size_t i = 0; i < kPoolSize; ++i) {
    const double x = 4000.0 * rng.Uniform(), y = 3000.0 * rng.Uniform();
    const bool observed = rng.Uniform() < 0.4;
    std::ostringstream triplet;
    triplet.setf(std::ios::fixed);
    triplet.precision(2);
    triplet << x << ' ' << y << ' ';
    if (observed) {
      triplet << (rng.NextU64() % 1000000);
    } else {
      triplet << -1;
    }
    triplet_pool_.push_back(triplet.str());
  }
}

bool ColmapFixtureStreambuf::Refill() {
  chunk_.clear();
  if (!header_done_) {
    header_done_ = true;
    chunk_ =
        "# Image list with two lines of data per image:\n"
        "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n"
        "#   POINTS2D[] as (X, Y, POINT3D_ID)\n"
        "# Number of images: " +
        std::to_string(trajectory_.size()) + "\n";
  } else if (next_image_ < trajectory_.size()) {
    const size_t index = next_image_++;
    const PoseSample& s = trajectory_.samples[index];
    const Quaterniond q_w2c = CanonicalQuaternion<double>(QuaternionConjugate<double>(s.orientation));
    const Vector3d t_w2c = -(QuaternionToRotationMatrix<double>(q_w2c) * s.position);
    chunk_ += std::to_string(index + 1);
    for (int i = 0; i < 4; ++i) chunk_ += ' ' + FormatDouble(q_w2c(i));
    for (int i = 0; i < 3; ++i) chunk_ += ' ' + FormatDouble(t_w2c(i));
    std::string digits = std::to_string(s.frame_key);
    if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
    chunk_ += " 1 frame_" + digits + ".jpg\n";
    for (size_t k = 0; k < points_per_image_; ++k) {
      if (k > 0) chunk_ += ' ';
      chunk_ += triplet_pool_[(index * 31 + k) % triplet_pool_.size()];
    }
    chunk_ += '\n';
  } else {
    return false;
  }
  bytes_produced_ += chunk_.size();
  setg(chunk_.data(), chunk_.data(), chunk_.data() + chunk_.size());
  return true;
}

ColmapFixtureStreambuf::int_type ColmapFixtureStreambuf::underflow() {
  if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
  if (!Refill()) return traits_type::eof();
  return traits_type::to_int_type(*gptr());
}

void WriteColmapImagesText(const Trajectory& trajectory, std::ostream& out,
                           size_t points_per_image, uint64_t seed) {
  ColmapFixtureStreambuf source(trajectory, points_per_image, seed);
  out << &source;
}

}  // namespace sfmval
