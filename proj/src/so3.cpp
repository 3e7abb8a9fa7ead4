#include "rotavg/so3.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rotavg {

bool Rotation::is_rotation(const Mat3& m, double tol) {
  const Mat3 gram = m * m.transpose();
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  if (!is_rotation(m, tol)) {
    throw std::invalid_argument("Rotation::from_matrix: not orthogonal with determinant +1");
  }
  return Rotation(m);
}

Mat3 hat(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Vec3 vee(const Mat3& skew) {
  return {skew(2, 1), skew(0, 2), skew(1, 0)};
}

Rotation exp_map(const AxisAngle& a) {
  const double theta2 = a.v.squaredNorm();
  const Mat3 k = hat(a.v);
  double c1, c2;  // sin(t)/t and (1-cos(t))/t^2
  if (theta2 < 1e-8) {
    c1 = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    const double theta = std::sqrt(theta2);
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / theta2;
  }
  return Rotation::from_matrix_unchecked(Mat3::Identity() + c1 * k + c2 * (k * k));
}

namespace {

// Largest-pivot quaternion extraction (w, x, y, z); accurate at all angles.
Eigen::Vector4d matrix_to_quaternion(const Mat3& m) {
  Eigen::Vector4d q;
  const double tr = m.trace();
  if (tr > m(0, 0) && tr > m(1, 1) && tr > m(2, 2)) {
    const double s = std::sqrt(tr + 1.0) * 2.0;
    q << 0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s;
  } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
    const double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
    q << (m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s;
  } else if (m(1, 1) > m(2, 2)) {
    const double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
    q << (m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s;
  } else {
    const double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
    q << (m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s;
  }
  return q.normalized();
}

}  // namespace

AxisAngle log_map(const Rotation& r) {
  Eigen::Vector4d q = matrix_to_quaternion(r.matrix());
  if (q(0) < 0.0) q = -q;  // principal branch, angle in [0, pi]
  const Vec3 qv = q.tail<3>();
  const double sn = qv.norm();
  const double theta = 2.0 * std::atan2(sn, q(0));
  double f;  // theta / sin(theta/2)
  if (sn < 1e-9) {
    f = 2.0 / q(0);
  } else {
    f = theta / sn;
  }
  return AxisAngle{f * qv};
}

Rotation closest_rotation(const Mat3& m, bool* degenerate) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if (degenerate != nullptr) {
    const double scale = svd.singularValues()(0);
    *degenerate = svd.singularValues()(1) <= 1e-12 * std::max(scale, 1.0);
  }
  Mat3 s = Mat3::Identity();
  s(2, 2) = ((u * v.transpose()).determinant() < 0.0) ? -1.0 : 1.0;
  return Rotation::from_matrix_unchecked(u * s * v.transpose());
}

GaugeAlignment align_gauge(const std::vector<Rotation>& est,
                           const std::vector<Rotation>& gt) {
  if (est.empty() || est.size() != gt.size()) {
    throw std::invalid_argument("align_gauge: lists must be nonempty and of equal length");
  }
  Mat3 accum = Mat3::Zero();
  for (std::size_t i = 0; i < est.size(); ++i) {
    accum += est[i].matrix().transpose() * gt[i].matrix();
  }
  const Rotation v = closest_rotation(accum);
  GaugeAlignment out{v, {}};
  out.aligned.reserve(est.size());
  for (const Rotation& r : est) out.aligned.push_back(r * v);
  return out;
}

Mat4 hull_operator(const Mat3& y) {
  Mat4 a;
  a(0, 0) = -y(0, 0) - y(1, 1) + y(2, 2);
  a(0, 1) = y(0, 2) + y(2, 0);
  a(0, 2) = y(0, 1) - y(1, 0);
  a(0, 3) = y(1, 2) + y(2, 1);
  a(1, 1) = y(0, 0) - y(1, 1) - y(2, 2);
  a(1, 2) = y(1, 2) - y(2, 1);
  a(1, 3) = y(0, 1) + y(1, 0);
  a(2, 2) = y(0, 0) + y(1, 1) + y(2, 2);
  a(2, 3) = y(2, 0) - y(0, 2);
  a(3, 3) = -y(0, 0) + y(1, 1) - y(2, 2);
  a(1, 0) = a(0, 1);
  a(2, 0) = a(0, 2);
  a(3, 0) = a(0, 3);
  a(2, 1) = a(1, 2);
  a(3, 1) = a(1, 3);
  a(3, 2) = a(2, 3);
  return a;
}

bool in_hull(const Mat3& y, double tol) {
  const Mat4 lmi = hull_operator(y) + Mat4::Identity();
  Eigen::SelfAdjointEigenSolver<Mat4> eig(lmi, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

HullMatrix HullMatrix::from_matrix(const Mat3& y, double tol) {
  if (!in_hull(y, tol)) {
    throw std::invalid_argument("HullMatrix: matrix is outside conv(SO(3))");
  }
  return HullMatrix{y};
}

Mat3 quaternion_to_matrix(const Eigen::Vector4d& q) {
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return m;
}

Rotation random_rotation(Rng& rng) {
  return Rotation::from_matrix_unchecked(quaternion_to_matrix(rng.quaternion()));
}

}  // namespace rotavg
