#include "rotavg/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace rotavg {

EdgeMeasurement EdgeMeasurement::make(int i, int j, const Rotation& r_tilde, const Mat3& h) {
  if (i == j) {
    throw std::invalid_argument("EdgeMeasurement: i and j must differ");
  }
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > kSymTol) {
    throw std::invalid_argument("EdgeMeasurement: hessian is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(h, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("EdgeMeasurement: hessian is indefinite");
  }
  return EdgeMeasurement{i, j, r_tilde, h};
}

Vec3 WeightMatrix::eigenvalues_desc() const {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

WeightMatrix weight_from_hessian(const Mat3& h) {
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > EdgeMeasurement::kSymTol) {
    throw std::invalid_argument("weight_from_hessian: input is not symmetric");
  }
  return WeightMatrix{0.5 * h.trace() * Mat3::Identity() - h};
}

bool is_indefinite(const WeightMatrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m.m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() < -tol;
}

Eigen::Matrix<double, 9, 3> hat_jacobian() {
  Eigen::Matrix<double, 9, 3> j = Eigen::Matrix<double, 9, 3>::Zero();
  j(1, 2) = 1.0;
  j(2, 1) = -1.0;
  j(3, 2) = -1.0;
  j(5, 0) = 1.0;
  j(6, 1) = 1.0;
  j(7, 0) = -1.0;
  return j;
}

double quadform_identity_check(const Mat3& h, int trials) {
  const Mat3 m = weight_from_hessian(h).m;
  Rng rng(0x9e3779b97f4a7c15ull);  // fixed; the check is a pure function of h
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vec3 v = rng.normal3();
    const Mat3 k = hat(v);
    const double lhs = v.dot(h * v);
    const double rhs = (k.transpose() * m * k).trace();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  const Eigen::Matrix<double, 9, 3> j = hat_jacobian();
  const Eigen::Matrix<double, 9, 9> imkm =
      Eigen::kroneckerProduct(Mat3::Identity(), m);
  const Mat3 recovered = j.transpose() * imkm * j;
  worst = std::max(worst, (recovered - h).cwiseAbs().maxCoeff());
  return worst;
}

SingleTermMinimizers single_term_minimizers(const WeightMatrix& m, const Rotation& r_tilde) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m.m);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("single_term_minimizers: eigendecomposition failed");
  }
  const Vec3 lam = eig.eigenvalues().reverse();          // descending
  const Mat3 u = eig.eigenvectors().rowwise().reverse(); // columns match lam

  SingleTermMinimizers out;
  out.degenerate = std::abs(lam(1) - std::abs(lam(2))) < 1e-10;

  const double trace_m = lam.sum();
  double best_so3 = std::numeric_limits<double>::infinity();
  double best_o3 = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 8; ++mask) {
    Vec3 s;
    for (int k = 0; k < 3; ++k) s(k) = (mask & (1 << k)) ? -1.0 : 1.0;
    // f(U S U^T r_tilde) = tr(M) - sum_k s_k lam_k
    const double value = trace_m - s.dot(lam);
    const Mat3 candidate = u * s.asDiagonal() * u.transpose() * r_tilde.matrix();
    const bool proper = s.prod() > 0.0;
    if (proper && value < best_so3) {
      best_so3 = value;
      out.so3_minimizer = Rotation::from_matrix_unchecked(candidate);
      out.so3_value = value;
    }
    if (value < best_o3) {
      best_o3 = value;
      out.o3_minimizer = candidate;
      out.o3_value = value;
    }
  }
  return out;
}

namespace {

// r^alpha via the principal logarithm.
Mat3 fractional_rotation_power(const Rotation& r, double alpha) {
  if (alpha == 0.0) return Mat3::Identity();
  if (alpha == 1.0) return r.matrix();
  const AxisAngle w = log_map(r);
  return exp_map(AxisAngle{alpha * w.v}).matrix();
}

}  // namespace

bool CostMatrix::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return index_.count({i, j}) > 0;
}

Mat3 CostMatrix::block(int i, int j) const {
  if (i == j) return Mat3::Zero();
  const bool swapped = i > j;
  if (swapped) std::swap(i, j);
  auto it = index_.find({i, j});
  if (it == index_.end()) return Mat3::Zero();
  const Mat3& b = blocks_[it->second].b;
  return swapped ? Mat3(b.transpose()) : b;
}

double CostMatrix::objective_value(const std::vector<Rotation>& rotations) const {
  if (static_cast<int>(rotations.size()) != n_cams_) {
    throw std::invalid_argument("objective_value: need one rotation per camera");
  }
  double total = 0.0;
  for (const Block& e : blocks_) {
    const Mat3 rel = rotations[e.i].matrix() * rotations[e.j].matrix().transpose();
    total += (e.b * rel).trace();  // <b^T, R_i R_j^T>
  }
  return -2.0 * total;
}

Eigen::MatrixXd CostMatrix::sdp_coefficient() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3 * n_cams_, 3 * n_cams_);
  for (const Block& e : blocks_) {
    c.block<3, 3>(3 * e.i, 3 * e.j) = e.b.transpose();
    c.block<3, 3>(3 * e.j, 3 * e.i) = e.b;
  }
  return c;
}

CostMatrix assemble_cost(const std::vector<EdgeMeasurement>& edges, int n,
                         CostMode mode, double alpha) {
  if (n < 1) throw std::invalid_argument("assemble_cost: n must be positive");
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("assemble_cost: alpha must lie in [0, 1]");
  }

  CostMatrix cost;
  cost.n_cams_ = n;

  double scale = 1.0;
  if (mode == CostMode::Anisotropic && !edges.empty()) {
    double sum_lmax = 0.0;
    for (const EdgeMeasurement& e : edges) {
      Eigen::SelfAdjointEigenSolver<Mat3> eig(e.h, Eigen::EigenvaluesOnly);
      sum_lmax += eig.eigenvalues().maxCoeff();
    }
    scale = sum_lmax / static_cast<double>(edges.size());
    if (scale <= 0.0) scale = 1.0;
  }
  cost.scale_ = scale;

  for (const EdgeMeasurement& e : edges) {
    int i = e.i, j = e.j;
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("assemble_cost: edge (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ") is out of range");
    }
    Rotation r = e.r_tilde;
    if (i > j) {
      // Store every pair in i < j orientation; the swapped measurement is
      // the transpose with conjugated curvature.
      std::swap(i, j);
      r = e.r_tilde.transposed();
    }
    if (cost.index_.count({i, j}) > 0) {
      throw std::invalid_argument("assemble_cost: duplicate edge (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ")");
    }

    Mat3 h = e.h;
    if (i != e.i) {
      // Swapping orientation maps the deviation to -R~^T w, so the
      // curvature conjugates: H' = R~^T H R~ with R~ the original estimate.
      const Mat3 orig = e.r_tilde.matrix();
      h = orig.transpose() * e.h * orig;
    }
    Mat3 weight = Mat3::Identity();
    if (mode == CostMode::Anisotropic) weight = weight_from_hessian(h).m;

    Mat3 coeff = weight * r.matrix();
    if (alpha != 0.0) {
      const Mat3 ra = fractional_rotation_power(r, alpha);
      const Mat3 rb = fractional_rotation_power(r, 1.0 - alpha);
      coeff = ra * weight * rb;
    }
    cost.index_[{i, j}] = static_cast<int>(cost.blocks_.size());
    cost.blocks_.push_back({i, j, Mat3(coeff.transpose() / scale)});
  }
  std::sort(cost.blocks_.begin(), cost.blocks_.end(),
            [](const CostMatrix::Block& a, const CostMatrix::Block& b) {
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });
  for (int k = 0; k < static_cast<int>(cost.blocks_.size()); ++k) {
    cost.index_[{cost.blocks_[k].i, cost.blocks_[k].j}] = k;
  }
  return cost;
}

double percent_indefinite(const std::vector<EdgeMeasurement>& edges) {
  if (edges.empty()) return 0.0;
  int count = 0;
  for (const EdgeMeasurement& e : edges) {
    if (is_indefinite(weight_from_hessian(e.h))) ++count;
  }
  return 100.0 * static_cast<double>(count) / static_cast<double>(edges.size());
}

}  // namespace rotavg
