#pragma once

// Closed-form absolute orientation with unit quaternions.
//
// Given paired points x_i (estimate frame) and y_i (ground-truth frame), finds
// the similarity (s, R, t) minimizing sum ||y_i - (s R x_i + t)||^2:
//
//   1. centroids x̄, ȳ and cross-covariance M = sum (x_i - x̄)(y_i - ȳ)^T
//   2. the symmetric traceless 4x4 matrix N built from M
//   3. R is the unit quaternion eigenvector of N's largest eigenvalue
//   4. s from the centered spreads, t = ȳ - s R x̄
//
// Point sets are passed as 3xN Eigen expressions, one column per point.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "sfmval/error.h"
#include "sfmval/geometry/rotation.h"

namespace sfmval {

template <typename Scalar>
using Matrix3X = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
struct SimilarityTransform {
  Scalar scale = 1;
  Quaternion<Scalar> rotation = IdentityQuaternion<Scalar>();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();

  static SimilarityTransform Identity() { return {}; }

  Matrix3<Scalar> RotationMatrix() const {
    return QuaternionToRotationMatrix<Scalar>(rotation);
  }

  Vector3<Scalar> Apply(const Vector3<Scalar>& p) const {
    return scale * (RotationMatrix() * p) + translation;
  }

  // s' = 1/s, R' = R^T, t' = -R^T t / s.
  SimilarityTransform Inverse() const {
    SimilarityTransform inv;
    inv.scale = Scalar(1) / scale;
    inv.rotation = CanonicalQuaternion<Scalar>(QuaternionConjugate<Scalar>(rotation));
    inv.translation = -(RotationMatrix().transpose() * translation) / scale;
    return inv;
  }

  bool operator==(const SimilarityTransform&) const = default;
};
using SimilarityTransformd = SimilarityTransform<double>;

template <typename Scalar>
struct CrossCovariance {
  Matrix3<Scalar> matrix = Matrix3<Scalar>::Zero();
  Vector3<Scalar> source_centroid = Vector3<Scalar>::Zero();
  Vector3<Scalar> target_centroid = Vector3<Scalar>::Zero();
};

template <typename DerivedX, typename DerivedY>
CrossCovariance<typename DerivedX::Scalar> ComputeCrossCovariance(
    const Eigen::MatrixBase<DerivedX>& source, const Eigen::MatrixBase<DerivedY>& target) {
  using Scalar = typename DerivedX::Scalar;
  static_assert(DerivedX::RowsAtCompileTime == 3 && DerivedY::RowsAtCompileTime == 3,
                "point sets are 3xN");
  if (source.cols() != target.cols()) {
    Fail(ErrorCode::kInvalidArgument, "point sets differ in size");
  }
  if (source.cols() < 1) {
    Fail(ErrorCode::kTooFewPoints, "cross-covariance needs at least one pair");
  }
  CrossCovariance<Scalar> cov;
  cov.source_centroid = source.rowwise().mean();
  cov.target_centroid = target.rowwise().mean();
  cov.matrix = (source.colwise() - cov.source_centroid) *
               (target.colwise() - cov.target_centroid).transpose();
  return cov;
}

// With Sab = M(a, b).
template <typename Scalar>
Matrix4<Scalar> BuildNMatrix(const Matrix3<Scalar>& M) {
  const Scalar sxx = M(0, 0), sxy = M(0, 1), sxz = M(0, 2);
  const Scalar syx = M(1, 0), syy = M(1, 1), syz = M(1, 2);
  const Scalar szx = M(2, 0), szy = M(2, 1), szz = M(2, 2);
  Matrix4<Scalar> N;
  N << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,
       syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,
       szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,
       sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;
  return N;
}

template <typename Scalar>
struct EigenPair {
  Scalar value = 0;
  Vector4<Scalar> vector = Vector4<Scalar>::Zero();
  int sweeps = 0;
};

inline constexpr double kJacobiOffDiagonalTolerance = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kSymmetryTolerance = 1e-9;

// Largest eigenvalue and its unit eigenvector of a symmetric 4x4 matrix,
// by cyclic Jacobi rotations. Each rotation zeroes one off-diagonal pair
// exactly, so the off-diagonal Frobenius norm converges quadratically.
template <typename Scalar>
EigenPair<Scalar> MaxEigenpairSym4(const Matrix4<Scalar>& N) {
  if (!N.allFinite()) Fail(ErrorCode::kNonFinite, "matrix has non-finite entries");
  const Scalar asymmetry = (N - N.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > Scalar(kSymmetryTolerance) * std::max<Scalar>(1, N.cwiseAbs().maxCoeff())) {
    Fail(ErrorCode::kNotSymmetric, "matrix is not symmetric");
  }

  Matrix4<Scalar> A = (N + N.transpose()) / 2;
  Matrix4<Scalar> V = Matrix4<Scalar>::Identity();
  const auto off_norm = [&A]() {
    Scalar sum = 0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        if (p != q) sum += A(p, q) * A(p, q);
    return std::sqrt(sum);
  };

  int sweep = 0;
  for (; off_norm() > Scalar(kJacobiOffDiagonalTolerance); ++sweep) {
    if (sweep == kJacobiMaxSweeps) {
      Fail(ErrorCode::kNoConvergence,
           "Jacobi iteration did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
    }
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const Scalar apq = A(p, q);
        if (apq == Scalar(0)) continue;
        // Smaller root of t^2 + 2 theta t - 1 = 0 keeps the rotation angle
        // at most pi/4.
        const Scalar theta = (A(q, q) - A(p, p)) / (2 * apq);
        Scalar t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        if (!std::isfinite(theta)) t = 0;
        const Scalar c = Scalar(1) / std::sqrt(t * t + 1);
        const Scalar s = t * c;

        for (int k = 0; k < 4; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = A(k, p), akq = A(k, q);
          A(k, p) = A(p, k) = c * akp - s * akq;
          A(k, q) = A(q, k) = s * akp + c * akq;
        }
        A(p, p) -= t * apq;
        A(q, q) += t * apq;
        A(p, q) = A(q, p) = 0;

        for (int k = 0; k < 4; ++k) {
          const Scalar vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (A(i, i) > A(best, best)) best = i;

  EigenPair<Scalar> result;
  result.value = A(best, best);
  result.vector = V.col(best).normalized();
  result.sweeps = sweep;
  return result;
}

enum class ScaleMode {
  // s = sqrt(sum ||y'||^2 / sum ||x'||^2); independent of the rotation.
  kSymmetric,
  // s = sum y' . (R x') / sum ||x'||^2; least squares given R.
  kLeastSquares,
};

struct HornOptions {
  bool with_scale = true;
  ScaleMode scale_mode = ScaleMode::kSymmetric;
};

inline constexpr double kDegenerateSingularRatio = 1e-9;
inline constexpr double kDegenerateSpread = 1e-18;

template <typename DerivedX, typename DerivedY>
SimilarityTransform<typename DerivedX::Scalar> HornAlign(
    const Eigen::MatrixBase<DerivedX>& source, const Eigen::MatrixBase<DerivedY>& target,
    const HornOptions& options = {}) {
  using Scalar = typename DerivedX::Scalar;
  if (source.cols() != target.cols()) {
    Fail(ErrorCode::kInvalidArgument, "point sets differ in size");
  }
  if (source.cols() < 3) {
    Fail(ErrorCode::kTooFewPoints,
         "need at least 3 pairs, got " + std::to_string(source.cols()));
  }
  if (!source.allFinite() || !target.allFinite()) {
    Fail(ErrorCode::kNonFinite, "point sets contain non-finite coordinates");
  }

  const CrossCovariance<Scalar> cov = ComputeCrossCovariance(source, target);
  const Matrix3X<Scalar> centered_source = source.colwise() - cov.source_centroid;
  const Scalar source_spread = centered_source.squaredNorm();
  if (source_spread <= Scalar(kDegenerateSpread)) {
    Fail(ErrorCode::kDegenerateGeometry, "source points coincide");
  }
  const Vector3<Scalar> singular =
      Eigen::JacobiSVD<Matrix3<Scalar>>(cov.matrix).singularValues();
  if (singular(1) <= Scalar(kDegenerateSingularRatio) * singular(0)) {
    Fail(ErrorCode::kDegenerateGeometry,
         "cross-covariance has rank < 2 (collinear points); rotation is unobservable");
  }

  SimilarityTransform<Scalar> T;
  T.rotation = UnitQuaternion<Scalar>(MaxEigenpairSym4<Scalar>(BuildNMatrix<Scalar>(cov.matrix)).vector);
  const Matrix3<Scalar> R = T.RotationMatrix();

  if (options.with_scale) {
    if (options.scale_mode == ScaleMode::kSymmetric) {
      const Scalar target_spread = (target.colwise() - cov.target_centroid).squaredNorm();
      T.scale = std::sqrt(target_spread / source_spread);
    } else {
      // trace(R M) = sum y' . R x'
      T.scale = (R * cov.matrix).trace() / source_spread;
    }
    if (!(T.scale > 0) || !std::isfinite(T.scale)) {
      Fail(ErrorCode::kDegenerateGeometry, "estimated scale is not positive");
    }
  }
  T.translation = cov.target_centroid - T.scale * (R * cov.source_centroid);
  return T;
}

}  // namespace sfmval
