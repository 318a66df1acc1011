#pragma once

// Test-side reference computations, written independently of the library
// code paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat4 = Eigen::Matrix4d;

// R = I + sin(a) K + (1 - cos(a)) K^2 for unit axis k.
inline Mat3 Rodrigues(Vec3 axis, double angle) {
  axis.normalize();
  Mat3 K;
  K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
}

// Uniform random rotation from a Gaussian 4-vector, mapped through the
// axis-angle form rather than the library's quaternion formula.
inline Mat3 RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Vector4d q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  const double angle = 2 * std::acos(std::clamp(std::abs(q(0)), 0.0, 1.0));
  Vec3 axis = q.tail<3>() * (q(0) < 0 ? -1.0 : 1.0);
  if (axis.norm() < 1e-15) return Mat3::Identity();
  return Rodrigues(axis, angle);
}

// Coefficients c[0..4] of det(lambda I - A) by Faddeev-LeVerrier.
inline std::array<long double, 5> CharacteristicPolynomial(const Mat4& A) {
  using LMat = Eigen::Matrix<long double, 4, 4>;
  const LMat a = A.cast<long double>();
  std::array<long double, 5> c{};
  c[4] = 1;
  LMat m = LMat::Zero();
  for (int k = 1; k <= 4; ++k) {
    m = a * m + c[5 - k] * LMat::Identity();
    c[4 - k] = -(a * m).trace() / k;
  }
  return c;
}

inline long double EvalPolynomial(const std::vector<long double>& c, long double x) {
  long double value = 0;
  for (size_t i = c.size(); i-- > 0;) value = value * x + c[i];
  return value;
}

// Largest real root of a monic-sign polynomial whose roots are all real and
// bounded by `bound`: it lies between the largest root of the derivative
// and the bound, where p is increasing.
inline long double LargestRoot(const std::vector<long double>& c, long double bound) {
  const size_t degree = c.size() - 1;
  if (degree == 1) return -c[0] / c[1];
  std::vector<long double> derivative(degree);
  for (size_t i = 1; i <= degree; ++i) derivative[i - 1] = c[i] * static_cast<long double>(i);
  long double lo = LargestRoot(derivative, bound), hi = bound;
  for (int i = 0; i < 300 && hi > lo; ++i) {
    const long double mid = (lo + hi) / 2;
    if (EvalPolynomial(c, mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

inline double MaxEigenvalueByBisection(const Mat4& A) {
  const auto c = CharacteristicPolynomial(A);
  long double bound = 0;
  for (int r = 0; r < 4; ++r) bound = std::max<long double>(bound, A.row(r).cwiseAbs().sum());
  return static_cast<double>(LargestRoot({c.begin(), c.end()}, bound + 1));
}

// First pass finds the largest magnitude, second pass sums squares scaled by
// it in extended precision.
inline double TwoPassRms(const std::vector<double>& v) {
  long double scale = 0;
  for (const double x : v) scale = std::max<long double>(scale, std::abs(x));
  if (scale == 0) return 0;
  long double sum_sq = 0;
  for (const double x : v) {
    const long double r = x / scale;
    sum_sq += r * r;
  }
  return static_cast<double>(scale * std::sqrt(sum_sq / static_cast<long double>(v.size())));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sfmval_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
