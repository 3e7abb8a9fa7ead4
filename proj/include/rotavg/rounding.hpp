#pragma once

#include <vector>

#include "rotavg/conic_solver.hpp"
#include "rotavg/cost.hpp"

namespace rotavg {

// Global-optimality certificate of a rounded SDP solution: a rank-3 Gram
// matrix factors into rotations exactly, so a rank estimate of 3 together
// with a negligible rounded-cost-to-bound gap certifies the rotations.
struct Certificate {
  int rank_estimate = 0;
  double sdp_lower_bound = 0.0;
  double rounded_cost = 0.0;
  double relative_gap = 0.0;  // (rounded - bound) / (1 + |bound|)
  bool tight = false;         // rank_estimate == 3 && relative_gap <= gap_tol
  std::vector<double> per_block_det;  // determinants of the rank-3 factor blocks
};

// Smallest k whose top-k singular values exceed `energy` of the total sum;
// 0 for the zero matrix. For a PSD input the singular values are its
// eigenvalues (clamped at zero).
int estimate_rank(const Eigen::MatrixXd& x, double energy = 0.999);

struct RoundedRotations {
  std::vector<Rotation> rotations;
  std::vector<double> block_det;  // det of each 3x3 factor block after coset fix
  bool degenerate = false;        // third eigenvalue of X was (near) zero
};

// Truncates X to its best rank-3 approximation X ~ V V^T, splits V into 3x3
// blocks and projects each to the nearest rotation. The factorization gauge
// is arbitrary; when the first block sits in the reflection coset the third
// column of V is flipped globally so all blocks land near SO(3).
RoundedRotations round_to_rotations(const Eigen::MatrixXd& x);

// Rounds the solver's Gram matrix and compares the rounded feasible cost
// against the SDP lower bound. Requires an Optimal solve. When `rounded`
// is non-null the rotation estimate is written there.
Certificate certify(const CostMatrix& cost, const ConicProgram& program,
                    const SolverResult& solve, double gap_tol = 1e-4,
                    double rank_energy = 0.999,
                    std::vector<Rotation>* rounded = nullptr);

}  // namespace rotavg
