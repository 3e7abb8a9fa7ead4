#include "rotavg/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rotavg {

int estimate_rank(const Eigen::MatrixXd& x, double energy) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x, Eigen::EigenvaluesOnly);
  Eigen::VectorXd sv = eig.eigenvalues().cwiseMax(0.0);
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  const double total = sv.sum();
  if (total <= 0.0) return 0;
  double acc = 0.0;
  for (int k = 0; k < sv.size(); ++k) {
    acc += sv(k);
    if (acc > energy * total) return k + 1;
  }
  return static_cast<int>(sv.size());
}

RoundedRotations round_to_rotations(const Eigen::MatrixXd& x) {
  const int d = static_cast<int>(x.rows());
  if (d < 3 || d % 3 != 0) {
    throw std::invalid_argument("round_to_rotations: matrix size must be a positive multiple of 3");
  }
  const int n = d / 3;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (x + x.transpose()));
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("round_to_rotations: eigendecomposition failed");
  }

  // Top three eigenpairs (Eigen returns ascending order).
  Eigen::MatrixXd factor(d, 3);
  RoundedRotations out;
  double lam3 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const int idx = d - 1 - c;
    const double lam = std::max(eig.eigenvalues()(idx), 0.0);
    if (c == 2) lam3 = lam;
    factor.col(c) = std::sqrt(lam) * eig.eigenvectors().col(idx);
  }
  out.degenerate = lam3 <= 1e-9 * std::max(1.0, eig.eigenvalues().maxCoeff());

  // The factorization is defined only up to a global O(3) gauge; fix the
  // coset so blocks land near rotations rather than reflections.
  if (factor.topRows<3>().determinant() < 0.0) factor.col(2) *= -1.0;

  out.rotations.reserve(n);
  out.block_det.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Mat3 block = factor.middleRows<3>(3 * i);
    out.block_det.push_back(block.determinant());
    out.rotations.push_back(closest_rotation(block));
  }
  return out;
}

Certificate certify(const CostMatrix& cost, const ConicProgram& program,
                    const SolverResult& solve, double gap_tol, double rank_energy,
                    std::vector<Rotation>* rounded) {
  if (solve.status != SolveStatus::Optimal) {
    throw std::invalid_argument("certify: requires an Optimal solver result");
  }
  const Eigen::MatrixXd x = extract_gram(program, solve.primal_vector);

  Certificate cert;
  cert.rank_estimate = estimate_rank(x, rank_energy);
  RoundedRotations r = round_to_rotations(x);
  cert.per_block_det = r.block_det;
  cert.sdp_lower_bound = solve.primal_objective;
  cert.rounded_cost = cost.objective_value(r.rotations);
  cert.relative_gap = (cert.rounded_cost - cert.sdp_lower_bound) /
                      (1.0 + std::abs(cert.sdp_lower_bound));
  cert.tight = (cert.rank_estimate == 3) && (cert.relative_gap <= gap_tol);
  if (rounded != nullptr) *rounded = std::move(r.rotations);
  return cert;
}

}  // namespace rotavg
