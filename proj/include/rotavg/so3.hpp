#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rotavg/rng.hpp"

namespace rotavg {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;

// A 3x3 direction-cosine matrix with R R^T = I and det R = +1.
class Rotation {
 public:
  static constexpr double kOrthoTol = 1e-9;

  // Validating constructor; throws std::invalid_argument on a non-rotation.
  static Rotation from_matrix(const Mat3& m, double tol = kOrthoTol);

  // Trusted path for matrices that are rotations by construction.
  static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }

  static Rotation identity() { return Rotation(Mat3::Identity()); }

  const Mat3& matrix() const { return m_; }

  Rotation transposed() const { return Rotation(m_.transpose()); }

  // Group composition.
  Rotation operator*(const Rotation& rhs) const { return Rotation(m_ * rhs.m_); }

  static bool is_rotation(const Mat3& m, double tol = kOrthoTol);

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

// Axis-angle vector: direction = rotation axis, norm = angle in radians.
// Principal-branch values produced by log_map satisfy |v| <= pi.
struct AxisAngle {
  Vec3 v;
};

Mat3 hat(const Vec3& v);
inline Mat3 hat(const AxisAngle& a) { return hat(a.v); }

// Inverse of hat on skew-symmetric matrices.
Vec3 vee(const Mat3& skew);

// Rodrigues formula, with series evaluation near zero angle.
Rotation exp_map(const AxisAngle& a);
inline Rotation exp_map(const Vec3& v) { return exp_map(AxisAngle{v}); }

// Principal logarithm, |result| <= pi. The axis is recovered through a
// largest-pivot quaternion extraction, which stays well conditioned at
// angles near pi where vee(R - R^T) degenerates; the angle->0 limit uses
// the series form of the normalization factor.
AxisAngle log_map(const Rotation& r);

// Frobenius-nearest rotation via SVD: m = U S V^T, R = U diag(1,1,det(UV^T)) V^T.
// `degenerate`, when given, is set if the second singular value is (near) zero,
// in which case the minimizer is not unique but the result is still a rotation.
Rotation closest_rotation(const Mat3& m, bool* degenerate = nullptr);

// Orthogonal Procrustes gauge fix: V minimizing sum_i |est_i V - gt_i|_F^2
// over SO(3), with aligned[i] = est[i] * V.
struct GaugeAlignment {
  Rotation v;
  std::vector<Rotation> aligned;
};
GaugeAlignment align_gauge(const std::vector<Rotation>& est,
                           const std::vector<Rotation>& gt);

// The linear map whose LMI  A(Y) + I >= 0  characterizes membership of Y in
// the convex hull of the rotation matrices.
Mat4 hull_operator(const Mat3& y);

bool in_hull(const Mat3& y, double tol = 1e-8);

// A 3x3 matrix constrained to conv(SO(3)); construction checks the LMI.
struct HullMatrix {
  Mat3 y;
  static HullMatrix from_matrix(const Mat3& y, double tol = 1e-8);
};

// Uniformly distributed rotation (via a uniform unit quaternion).
Rotation random_rotation(Rng& rng);

// Rotation matrix from a unit quaternion (w, x, y, z).
Mat3 quaternion_to_matrix(const Eigen::Vector4d& q);

}  // namespace rotavg
