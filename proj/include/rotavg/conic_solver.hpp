#pragma once

#include <memory>

#include <Eigen/Core>

#include "rotavg/sdp_model.hpp"

namespace rotavg {

enum class SolveStatus { Optimal, MaxIters, PrimalInfeasible, DualInfeasible };
const char* status_name(SolveStatus s);

struct SolverSettings {
  double abs_feas = 1e-5;
  double rel_feas = 1e-6;
  double infeas_tol = 1e-8;
  long max_iters = 500000;

  // Splitting internals; conventional values, all configurable.
  double step = 1.0;          // initial penalty of the splitting
  double relaxation = 1.5;    // over-relaxation factor
  bool adaptive_step = true;  // residual-balancing penalty updates
  bool equilibrate = true;    // Ruiz scaling of the constraint rows
  int check_every = 25;

  void validate() const;  // throws std::invalid_argument
};

struct Residuals {
  double primal = 0.0;  // |A z - b| / (1 + |b|), z the returned cone point
  double dual = 0.0;    // normalized dual residual of the splitting
  double gap = 0.0;     // |c^T z - b^T y| / (1 + |c^T z| + |b^T y|)
};

struct SolverResult {
  Eigen::VectorXd primal_vector;  // cone-feasible point, original scaling
  Eigen::VectorXd dual_vector;    // equality multipliers y
  SolveStatus status = SolveStatus::MaxIters;
  long iterations = 0;
  double primal_objective = 0.0;  // c^T primal_vector
  double dual_objective = 0.0;    // b^T dual_vector
  Residuals residuals;
  double wall_time_s = 0.0;
};

// Frobenius-nearest PSD matrix: eigen-decompose, clamp negative eigenvalues.
// Input must be symmetric within 1e-9; throws on eigensolver failure.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& block);

// Seam for substituting an external conic solver; the embedded splitting
// solver below is the default and the one the test suite certifies.
class ConicSolverBackend {
 public:
  virtual ~ConicSolverBackend() = default;
  virtual SolverResult solve(const ConicProgram& program,
                             const SolverSettings& settings) const = 0;
  virtual const char* name() const = 0;
};

// Operator-splitting (ADMM) solver. Alternates projection onto the affine
// constraints -- through a sparse Cholesky factorization of A A^T computed
// once -- with Euclidean projection onto the product of PSD cones, plus a
// scaled dual update. Deterministic: no randomness, fixed iteration order.
class SplittingSolver final : public ConicSolverBackend {
 public:
  SolverResult solve(const ConicProgram& program,
                     const SolverSettings& settings) const override;
  const char* name() const override { return "embedded-admm"; }
};

// Solves with the embedded splitting solver.
SolverResult solve(const ConicProgram& program, const SolverSettings& settings = {});

}  // namespace rotavg
