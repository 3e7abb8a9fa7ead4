#include "rotavg/spectral.hpp"

#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace rotavg {

DegreeMatrix degree_matrix(const std::vector<EdgeMeasurement>& edges, int n) {
  DegreeMatrix d;
  d.blocks.assign(n, Mat3::Zero());
  for (const EdgeMeasurement& e : edges) {
    int i = e.i, j = e.j;
    Mat3 r = e.r_tilde.matrix();
    Mat3 h = e.h;
    if (i > j) {
      std::swap(i, j);
      h = r.transpose() * h * r;
      r = Mat3(e.r_tilde.matrix().transpose());
    }
    const Mat3 m = weight_from_hessian(h).m;
    d.blocks[i] += m;
    d.blocks[j] += r.transpose() * m * r;
  }
  return d;
}

std::vector<Rotation> spectral_solve(const std::vector<EdgeMeasurement>& edges, int n) {
  if (n < 2) throw std::invalid_argument("spectral_solve: need at least two cameras");

  // Connectivity via union-find.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const EdgeMeasurement& e : edges) parent[find(e.i)] = find(e.j);
  for (int i = 1; i < n; ++i) {
    if (find(i) != find(0)) {
      throw std::invalid_argument("spectral_solve: measurement graph is disconnected");
    }
  }

  // Raw anisotropic block cost, unscaled, in the orientation pairing block
  // (i, j) with R_i R_j^T.
  const CostMatrix raw = assemble_cost(edges, n, CostMode::Anisotropic);
  Eigen::MatrixXd cost = raw.sdp_coefficient() * raw.scale();

  const DegreeMatrix deg = degree_matrix(edges, n);
  Eigen::MatrixXd b(3 * n, 3 * n);
  for (int i = 0; i < n; ++i) {
    const Mat3& di = deg.blocks[i];
    if (std::abs(di.determinant()) <= 1e-12 * std::max(1.0, di.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("spectral_solve: singular degree block at camera " +
                                  std::to_string(i));
    }
    b.middleRows<3>(3 * i) = di.inverse() * cost.middleRows<3>(3 * i);
  }
  b -= Eigen::MatrixXd::Identity(3 * n, 3 * n);

  // Three smallest right singular vectors of b, via the normal matrix.
  const Eigen::MatrixXd normal = b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("spectral_solve: eigendecomposition failed");
  }
  Eigen::MatrixXd v(3 * n, 3);
  for (int c = 0; c < 3; ++c) v.col(c) = eig.eigenvectors().col(c);

  if (v.topRows<3>().determinant() < 0.0) v.col(2) *= -1.0;

  std::vector<Rotation> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(closest_rotation(v.middleRows<3>(3 * i)));
  return out;
}

}  // namespace rotavg
