#include "sfmval/synth/circuit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sfmval/alignment/similarity.h"
#include "sfmval/synth/random.h"
#include "sfmval/util/text.h"

namespace sfmval {
namespace {

constexpr double kPi = std::numbers::pi;

struct PathPoint {
  Vector3d position;
  Vector3d tangent;
};

// Straight segments alternate with quarter arcs, counter-clockwise from
// (r, 0). Straight i runs along `dir` from `start`; arc i turns about
// `center` starting at angle `start_angle`.
class RoundedRectangle {
 public:
  explicit RoundedRectangle(const CircuitParams& p)
      : ex_(p.extent_x), ey_(p.extent_y), r_(p.corner_radius), h_(p.height) {
    const double sx = ex_ - 2 * r_, sy = ey_ - 2 * r_, arc = kPi * r_ / 2;
    lengths_ = {sx, arc, sy, arc, sx, arc, sy, arc};
  }

  double Length() const {
    double total = 0;
    for (const double l : lengths_) total += l;
    return total;
  }

  PathPoint At(double s) const {
    s = std::fmod(s, Length());
    if (s < 0) s += Length();
    size_t piece = 0;
    while (piece + 1 < lengths_.size() && s >= lengths_[piece]) {
      s -= lengths_[piece];
      ++piece;
    }
    s = std::min(s, lengths_[piece]);
    const int side = static_cast<int>(piece / 2);
    // Heading of straight `side`: +x, +y, -x, -y.
    static constexpr double kDirX[4] = {1, 0, -1, 0};
    static constexpr double kDirY[4] = {0, 1, 0, -1};
    const double starts[4][2] = {{r_, 0}, {ex_, r_}, {ex_ - r_, ey_}, {0, ey_ - r_}};
    PathPoint p;
    if (piece % 2 == 0) {
      p.position = Vector3d(starts[side][0] + kDirX[side] * s, starts[side][1] + kDirY[side] * s, h_);
      p.tangent = Vector3d(kDirX[side], kDirY[side], 0);
    } else {
      const double centers[4][2] = {{ex_ - r_, r_}, {ex_ - r_, ey_ - r_}, {r_, ey_ - r_}, {r_, r_}};
      const double angle = -kPi / 2 + side * kPi / 2 + (r_ > 0 ? s / r_ : 0.0);
      p.position = Vector3d(centers[side][0] + r_ * std::cos(angle),
                            centers[side][1] + r_ * std::sin(angle), h_);
      p.tangent = Vector3d(-std::sin(angle), std::cos(angle), 0);
    }
    return p;
  }

 private:
  double ex_, ey_, r_, h_;
  std::vector<double> lengths_;
};

// Smallest s' > s whose position lies `chord` away from At(s). Along the
// convex path the distance grows with slope in [1/sqrt(2), 1], so the update
// s' += chord - distance contracts.
double NextStation(const RoundedRectangle& path, double s, double chord) {
  const Vector3d from = path.At(s).position;
  double next = s + chord;
  for (int i = 0; i < 200; ++i) {
    const double gap = chord - (path.At(next).position - from).norm();
    next += gap;
    if (std::abs(gap) <= 1e-14 * (chord + std::abs(next))) break;
  }
  return next;
}

// Arc-length stations of n points with equal chords between neighbours,
// including the closing chord from the last point back to the first. The
// chord is found by bisection so that n steps wrap exactly once around.
std::vector<double> ChordStations(const RoundedRectangle& path, int n) {
  const double length = path.Length();
  const auto march = [&](double chord, std::vector<double>* stations) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      if (stations != nullptr) stations->push_back(s);
      s = NextStation(path, s, chord);
    }
    return s;
  };
  // A chord never exceeds its arc; corners shorten it by at most 1/sqrt(2).
  double lo = length / n / std::sqrt(2.0), hi = length / n;
  for (int i = 0; i < 100 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (march(mid, nullptr) < length) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  std::vector<double> stations;
  stations.reserve(static_cast<size_t>(n));
  march(hi, &stations);
  return stations;
}

}  // namespace

std::string_view OrientationModeName(OrientationMode mode) {
  switch (mode) {
    case OrientationMode::kForward: return "forward";
    case OrientationMode::kSideview: return "sideview";
    case OrientationMode::kTiltedSideview: return "tilted-sideview";
  }
  return "unknown";
}

std::optional<OrientationMode> ParseOrientationMode(std::string_view name) {
  for (auto mode : {OrientationMode::kForward, OrientationMode::kSideview,
                    OrientationMode::kTiltedSideview}) {
    if (OrientationModeName(mode) == name) return mode;
  }
  return std::nullopt;
}

void ValidateCircuitParams(const CircuitParams& p) {
  const auto fail = [](const std::string& detail) { Fail(ErrorCode::kInvalidParams, detail); };
  if (!(p.extent_x > 0) || !(p.extent_y > 0) || !std::isfinite(p.extent_x) ||
      !std::isfinite(p.extent_y)) {
    fail("extents must be positive and finite");
  }
  if (p.n_frames < 4) fail("n_frames must be at least 4");
  if (!std::isfinite(p.height)) fail("height must be finite");
  if (!(p.tilt_deg > 0 && p.tilt_deg < 90)) fail("tilt_deg must lie in (0, 90)");
  if (!(p.corner_radius >= 0) || 2 * p.corner_radius > std::min(p.extent_x, p.extent_y)) {
    fail("corner_radius must lie in [0, min(extent)/2], got " + FormatDouble(p.corner_radius));
  }
}

double CircuitLength(const CircuitParams& params) {
  ValidateCircuitParams(params);
  return RoundedRectangle(params).Length();
}

Quaterniond LookOrientation(const Vector3d& axis) {
  const Vector3d z = axis.normalized();
  const Vector3d x = z.cross(Vector3d::UnitZ()).normalized();
  const Vector3d y = z.cross(x);
  Matrix3d R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return RotationMatrixToQuaternion<double>(R);
}

Trajectory GenerateCircuit(const CircuitParams& params) {
  ValidateCircuitParams(params);
  const RoundedRectangle path(params);
  const std::vector<double> stations = ChordStations(path, params.n_frames);
  const double tilt = params.tilt_deg * kPi / 180.0;

  Trajectory trajectory;
  trajectory.frame_label = "synthetic-world";
  trajectory.source = TrajectorySource::kSynthetic;
  trajectory.samples.reserve(static_cast<size_t>(params.n_frames));
  for (int i = 0; i < params.n_frames; ++i) {
    const PathPoint p = path.At(stations[static_cast<size_t>(i)]);
    const Vector3d left(-p.tangent.y(), p.tangent.x(), 0);
    Vector3d axis;
    switch (params.orientation_mode) {
      case OrientationMode::kForward: axis = p.tangent; break;
      case OrientationMode::kSideview: axis = left; break;
      case OrientationMode::kTiltedSideview:
        axis = std::cos(tilt) * left + std::sin(tilt) * Vector3d::UnitZ();
        break;
    }
    PoseSample sample;
    sample.frame_key = static_cast<uint64_t>(i + 1);
    sample.position = p.position;
    sample.orientation = LookOrientation(axis);
    trajectory.samples.push_back(std::move(sample));
  }
  return trajectory;
}

Trajectory Perturb(const Trajectory& trajectory, const NoiseModel& model) {
  if (!(model.sigma.array() >= 0).all() || !(model.drift_step.array() >= 0).all() ||
      !model.sigma.allFinite() || !model.drift_step.allFinite()) {
    Fail(ErrorCode::kInvalidParams, "noise sigmas must be nonnegative");
  }
  if (!(model.dropout >= 0 && model.dropout < 1)) {
    Fail(ErrorCode::kInvalidParams, "dropout must lie in [0, 1)");
  }

  Trajectory out = trajectory;
  out.frame_label = "synthetic-estimate";
  out.source = TrajectorySource::kSynthetic;

  CounterRng drift_rng(model.seed, 1), noise_rng(model.seed, 2), dropout_rng(model.seed, 3);
  Vector3d drift = Vector3d::Zero();
  for (PoseSample& s : out.samples) {
    for (int axis = 0; axis < 3; ++axis) drift(axis) += model.drift_step(axis) * drift_rng.Normal();
    Vector3d noise;
    for (int axis = 0; axis < 3; ++axis) noise(axis) = model.sigma(axis) * noise_rng.Normal();
    s.position += drift + noise;
  }

  if (model.gauge) out = ApplySimilarity(*model.gauge, out, out.frame_label);

  const auto n = out.samples.size();
  const auto drop = static_cast<size_t>(std::llround(model.dropout * static_cast<double>(n)));
  if (drop > 0) {
    // Partial Fisher-Yates over indices, then keep the survivors in order.
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    for (size_t i = 0; i < drop; ++i) {
      const size_t j = i + static_cast<size_t>(dropout_rng.Below(n - i));
      std::swap(order[i], order[j]);
    }
    std::vector<bool> removed(n, false);
    for (size_t i = 0; i < drop; ++i) removed[order[i]] = true;
    std::vector<PoseSample> kept;
    kept.reserve(n - drop);
    for (size_t i = 0; i < n; ++i)
      if (!removed[i]) kept.push_back(std::move(out.samples[i]));
    out.samples = std::move(kept);
  }
  return out;
}

}  // namespace sfmval
