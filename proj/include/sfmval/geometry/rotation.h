#pragma once

// Rotation representations and conversions.
//
// Quaternions are stored as Eigen 4-vectors in (w, x, y, z) order, which is
// the QW QX QY QZ column order of COLMAP's images.txt. Euler angles follow
// the intrinsic X-then-Y-then-Z convention, i.e. R = Rz(rz) * Ry(ry) * Rx(rx).
//
// Everything here is templated on the scalar type and header-only; the
// trajectory layer instantiates it with double.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "sfmval/error.h"

namespace sfmval {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
// Quaternion as (w, x, y, z).
template <typename Scalar>
using Quaternion = Eigen::Matrix<Scalar, 4, 1>;

using Vector3d = Vector3<double>;
using Matrix3d = Matrix3<double>;
using Matrix4d = Matrix4<double>;
using Quaterniond = Quaternion<double>;

template <typename Scalar>
struct EulerXYZ {
  Scalar rx = 0;
  Scalar ry = 0;
  Scalar rz = 0;
};
using EulerXYZd = EulerXYZ<double>;

inline constexpr double kMinQuaternionNorm = 1e-12;
inline constexpr double kRotationCheckTolerance = 1e-6;

template <typename Scalar>
Quaternion<Scalar> IdentityQuaternion() {
  return Quaternion<Scalar>(1, 0, 0, 0);
}

template <typename Derived>
bool AllFinite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

// Flips the sign so that w > 0, or, when w == 0, so that the first nonzero
// of (x, y, z) is positive. q and -q encode the same rotation.
template <typename Scalar>
Quaternion<Scalar> CanonicalQuaternion(const Quaternion<Scalar>& q) {
  for (int i = 0; i < 4; ++i) {
    if (q(i) > 0) return q;
    if (q(i) < 0) return -q;
  }
  return q;
}

template <typename Scalar>
Quaternion<Scalar> NormalizeQuaternion(const Quaternion<Scalar>& q) {
  if (!q.allFinite()) {
    Fail(ErrorCode::kNonFinite, "quaternion has non-finite components");
  }
  const Scalar norm = q.norm();
  if (!(norm > Scalar(kMinQuaternionNorm))) {
    Fail(ErrorCode::kZeroQuaternion, "quaternion norm is zero or below 1e-12");
  }
  return q / norm;
}

// Normalized and canonicalized.
template <typename Scalar>
Quaternion<Scalar> UnitQuaternion(const Quaternion<Scalar>& q) {
  return CanonicalQuaternion<Scalar>(NormalizeQuaternion<Scalar>(q));
}

template <typename Scalar>
Quaternion<Scalar> QuaternionConjugate(const Quaternion<Scalar>& q) {
  return Quaternion<Scalar>(q(0), -q(1), -q(2), -q(3));
}

// Hamilton product a * b: the rotation of b is applied first, then a.
template <typename Scalar>
Quaternion<Scalar> QuaternionMultiply(const Quaternion<Scalar>& a,
                                      const Quaternion<Scalar>& b) {
  return Quaternion<Scalar>(
      a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3),
      a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2),
      a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1),
      a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0));
}

template <typename Scalar>
Matrix3<Scalar> QuaternionToRotationMatrix(const Quaternion<Scalar>& qvec) {
  const Quaternion<Scalar> q = NormalizeQuaternion<Scalar>(qvec);
  const Scalar w = q(0), x = q(1), y = q(2), z = q(3);
  Matrix3<Scalar> R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

template <typename Scalar>
bool IsRotationMatrix(const Matrix3<Scalar>& R, Scalar tolerance) {
  if (!R.allFinite()) return false;
  const Scalar ortho_error =
      (R.transpose() * R - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff();
  return ortho_error <= tolerance &&
         std::abs(R.determinant() - Scalar(1)) <= tolerance;
}

// Shepperd's method: branch on the largest of (trace, R00, R11, R22) so the
// square root is always taken of a quantity >= 1.
template <typename Scalar>
Quaternion<Scalar> RotationMatrixToQuaternion(const Matrix3<Scalar>& R) {
  if (!IsRotationMatrix<Scalar>(R, Scalar(kRotationCheckTolerance))) {
    Fail(ErrorCode::kNotARotation,
         "matrix is not orthonormal with determinant +1");
  }
  const Scalar trace = R.trace();
  Quaternion<Scalar> q;
  if (trace >= R(0, 0) && trace >= R(1, 1) && trace >= R(2, 2)) {
    const Scalar w2 = std::sqrt(1 + trace);  // 2w
    q << w2 / 2, (R(2, 1) - R(1, 2)) / (2 * w2), (R(0, 2) - R(2, 0)) / (2 * w2),
        (R(1, 0) - R(0, 1)) / (2 * w2);
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const Scalar x2 = std::sqrt(1 + R(0, 0) - R(1, 1) - R(2, 2));
    q << (R(2, 1) - R(1, 2)) / (2 * x2), x2 / 2, (R(0, 1) + R(1, 0)) / (2 * x2),
        (R(0, 2) + R(2, 0)) / (2 * x2);
  } else if (R(1, 1) >= R(2, 2)) {
    const Scalar y2 = std::sqrt(1 - R(0, 0) + R(1, 1) - R(2, 2));
    q << (R(0, 2) - R(2, 0)) / (2 * y2), (R(0, 1) + R(1, 0)) / (2 * y2), y2 / 2,
        (R(1, 2) + R(2, 1)) / (2 * y2);
  } else {
    const Scalar z2 = std::sqrt(1 - R(0, 0) - R(1, 1) + R(2, 2));
    q << (R(1, 0) - R(0, 1)) / (2 * z2), (R(0, 2) + R(2, 0)) / (2 * z2),
        (R(1, 2) + R(2, 1)) / (2 * z2), z2 / 2;
  }
  return CanonicalQuaternion<Scalar>(q.normalized());
}

template <typename Scalar>
Matrix3<Scalar> RotationX(Scalar angle) {
  const Scalar c = std::cos(angle), s = std::sin(angle);
  Matrix3<Scalar> R;
  R << 1, 0, 0, 0, c, -s, 0, s, c;
  return R;
}

template <typename Scalar>
Matrix3<Scalar> RotationY(Scalar angle) {
  const Scalar c = std::cos(angle), s = std::sin(angle);
  Matrix3<Scalar> R;
  R << c, 0, s, 0, 1, 0, -s, 0, c;
  return R;
}

template <typename Scalar>
Matrix3<Scalar> RotationZ(Scalar angle) {
  const Scalar c = std::cos(angle), s = std::sin(angle);
  Matrix3<Scalar> R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

template <typename Scalar>
void CheckFinite(const EulerXYZ<Scalar>& e) {
  if (!std::isfinite(e.rx) || !std::isfinite(e.ry) || !std::isfinite(e.rz)) {
    Fail(ErrorCode::kNonFinite, "Euler angles must be finite");
  }
}

template <typename Scalar>
Matrix3<Scalar> EulerXYZToRotationMatrix(const EulerXYZ<Scalar>& e) {
  CheckFinite(e);
  return RotationZ(e.rz) * RotationY(e.ry) * RotationX(e.rx);
}

// Composes the three single-axis quaternions directly, without going
// through a matrix.
template <typename Scalar>
Quaternion<Scalar> EulerXYZToQuaternion(const EulerXYZ<Scalar>& e) {
  CheckFinite(e);
  const Quaternion<Scalar> qx(std::cos(e.rx / 2), std::sin(e.rx / 2), 0, 0);
  const Quaternion<Scalar> qy(std::cos(e.ry / 2), 0, std::sin(e.ry / 2), 0);
  const Quaternion<Scalar> qz(std::cos(e.rz / 2), 0, 0, std::sin(e.rz / 2));
  return UnitQuaternion<Scalar>(
      QuaternionMultiply<Scalar>(qz, QuaternionMultiply<Scalar>(qy, qx)));
}

// Recovers (rx, ry, rz) with ry in [-pi/2, pi/2]. At gimbal lock rz is set
// to zero. rx is solved last from the residual rotation so that errors in rz
// are compensated and the reconstructed matrix stays accurate near the lock.
template <typename Scalar>
EulerXYZ<Scalar> RotationMatrixToEulerXYZ(const Matrix3<Scalar>& R) {
  EulerXYZ<Scalar> e;
  const Scalar cos_ry = std::hypot(R(0, 0), R(1, 0));
  e.ry = std::atan2(-R(2, 0), cos_ry);
  e.rz = cos_ry > std::numeric_limits<Scalar>::epsilon()
             ? std::atan2(R(1, 0), R(0, 0))
             : Scalar(0);
  const Matrix3<Scalar> Rx =
      RotationY(e.ry).transpose() * RotationZ(e.rz).transpose() * R;
  e.rx = std::atan2(Rx(2, 1), Rx(1, 1));
  return e;
}

template <typename Scalar>
Vector3<Scalar> QuaternionRotatePoint(const Quaternion<Scalar>& q,
                                      const Vector3<Scalar>& p) {
  return QuaternionToRotationMatrix<Scalar>(q) * p;
}

// For a world-to-camera pose x_cam = R(q) * x_world + t, the camera center
// in world coordinates is C = -R^T * t.
template <typename Scalar>
Vector3<Scalar> ProjectionCenterFromPose(const Quaternion<Scalar>& q,
                                         const Vector3<Scalar>& t) {
  return -QuaternionToRotationMatrix<Scalar>(q).transpose() * t;
}

}  // namespace sfmval
