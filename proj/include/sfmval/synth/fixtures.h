#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <streambuf>
#include <string>
#include <vector>

#include "sfmval/synth/circuit.h"

namespace sfmval {

struct FixtureEntry {
  std::string label;
  std::string gt_path;   // relative to the manifest directory
  std::string est_path;
  uint64_t seed = 0;
};

inline constexpr uint64_t kDefaultFixtureSeed = 2017;
inline constexpr std::string_view kManifestHeader = "label,gt_path,est_path,seed";
inline constexpr std::string_view kManifestFilename = "manifest.csv";

struct FixturePreset {
  std::string label;
  OrientationMode mode;
  NoiseModel noise;  // seed filled in per run
};

// Six reconstructions: {non-tilted, tilted} sideview x {sequential matching,
// spatial matching with GPS, spatial matching with GPS and fewer features}.
// Noise presets are constructed so that the tilted sequential variant is the
// most accurate, z errors stay below 0.3 m, planar errors sit near 1 m, and
// the spatial variants are roughly 0.15 m worse on average.
std::vector<FixturePreset> ReferencePresets();

// Writes <label>.gt.traj / <label>.est.traj per preset plus manifest.csv into
// `out_dir` (created if missing). Fixture i uses seed base_seed + i.
std::vector<FixtureEntry> ReferenceFixtures(const std::filesystem::path& out_dir,
                                             uint64_t base_seed = kDefaultFixtureSeed);

void WriteManifest(std::ostream& out, const std::vector<FixtureEntry>& entries);
// The seed column is optional. Throws MalformedRecord.
std::vector<FixtureEntry> ReadManifest(std::istream& in);

// Streams a COLMAP images.txt for `trajectory` without materializing it:
// each image gets its world-to-camera pose line followed by a points line of
// `points_per_image` "X Y POINT3D_ID" triplets. Memory is bounded by one
// image's lines.
class ColmapFixtureStreambuf : public std::streambuf {
 public:
  ColmapFixtureStreambuf(const Trajectory& trajectory, size_t points_per_image,
                         uint64_t seed = kDefaultFixtureSeed);

  uint64_t bytes_produced() const { return bytes_produced_; }

 protected:
  int_type underflow() override;

 private:
  bool Refill();

  const Trajectory& trajectory_;
  size_t points_per_image_;
  std::vector<std::string> triplet_pool_;
  std::string chunk_;
  size_t next_image_ = 0;
  bool header_done_ = false;
  uint64_t bytes_produced_ = 0;
};

void WriteColmapImagesText(const Trajectory& trajectory, std::ostream& out,
                           size_t points_per_image, uint64_t seed = kDefaultFixtureSeed);

}  // namespace sfmval
