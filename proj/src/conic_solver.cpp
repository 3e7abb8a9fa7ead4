#include "rotavg/conic_solver.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace rotavg {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIters: return "max-iters";
    case SolveStatus::PrimalInfeasible: return "primal-infeasible";
    case SolveStatus::DualInfeasible: return "dual-infeasible";
  }
  return "?";
}

void SolverSettings::validate() const {
  if (abs_feas <= 0 || rel_feas <= 0 || infeas_tol <= 0) {
    throw std::invalid_argument("SolverSettings: tolerances must be positive");
  }
  if (max_iters < 1) throw std::invalid_argument("SolverSettings: max_iters must be >= 1");
  if (step <= 0 || relaxation <= 0) {
    throw std::invalid_argument("SolverSettings: step and relaxation must be positive");
  }
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& block) {
  if ((block - block.transpose()).eval().cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, block.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("psd_project: input is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (block + block.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("psd_project: eigendecomposition did not converge");
  }
  const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

// Cone projection in svec coordinates, block by block.
void project_cones(const ConicProgram& prog, Eigen::VectorXd& v) {
  for (std::size_t k = 0; k < prog.cone_dims.size(); ++k) {
    const int dim = prog.cone_dims[k];
    const int off = prog.cone_offsets[k];
    const int len = svec_dim(dim);
    Eigen::MatrixXd m = unsvec(v.segment(off, len), dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
      throw std::runtime_error("conic solver: cone projection eigensolver failed");
    }
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    m.noalias() = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    v.segment(off, len) = svec(m);
  }
}

double cone_distance(const ConicProgram& prog, const Eigen::VectorXd& v) {
  Eigen::VectorXd proj = v;
  project_cones(prog, proj);
  return (v - proj).norm();
}

struct Scaling {
  Eigen::VectorXd row;  // D_r
  Eigen::VectorXd col;  // D_c, constant within each cone block
};

// Ruiz-style equilibration: alternately normalize row inf-norms and
// per-cone-block column inf-norms. Column scaling is one scalar per PSD
// block so the scaled variable stays in the same cone.
Scaling equilibrate(const ConicProgram& prog, std::vector<ConicProgram::Row>& rows,
                    bool enabled) {
  const int m = static_cast<int>(rows.size());
  Scaling s;
  s.row = Eigen::VectorXd::Ones(m);
  s.col = Eigen::VectorXd::Ones(prog.num_vars);
  if (!enabled || m == 0) return s;

  const int n_blocks = static_cast<int>(prog.cone_dims.size());
  std::vector<int> block_of(prog.num_vars);
  for (int k = 0; k < n_blocks; ++k) {
    const int off = prog.cone_offsets[k];
    const int len = svec_dim(prog.cone_dims[k]);
    for (int t = 0; t < len; ++t) block_of[off + t] = k;
  }

  Eigen::VectorXd blk_scale = Eigen::VectorXd::Ones(n_blocks);
  for (int pass = 0; pass < 10; ++pass) {
    Eigen::VectorXd row_max = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd blk_max = Eigen::VectorXd::Zero(n_blocks);
    for (int r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
        const double a = std::abs(rows[r].vals[t]);
        row_max(r) = std::max(row_max(r), a);
        const int k = block_of[rows[r].cols[t]];
        blk_max(k) = std::max(blk_max(k), a);
      }
    }
    double drift = 0.0;
    for (int r = 0; r < m; ++r) {
      if (row_max(r) <= 0) continue;
      const double f = 1.0 / std::sqrt(row_max(r));
      drift = std::max(drift, std::abs(1.0 - row_max(r)));
      for (double& v : rows[r].vals) v *= f;
      s.row(r) *= f;
    }
    // Re-measure block maxima after the row pass, then scale columns.
    Eigen::VectorXd blk_f = Eigen::VectorXd::Ones(n_blocks);
    blk_max.setZero();
    for (int r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
        blk_max(block_of[rows[r].cols[t]]) =
            std::max(blk_max(block_of[rows[r].cols[t]]), std::abs(rows[r].vals[t]));
      }
    }
    for (int k = 0; k < n_blocks; ++k) {
      if (blk_max(k) <= 0) continue;
      blk_f(k) = 1.0 / std::sqrt(blk_max(k));
      drift = std::max(drift, std::abs(1.0 - blk_max(k)));
      blk_scale(k) *= blk_f(k);
    }
    for (int r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
        rows[r].vals[t] *= blk_f(block_of[rows[r].cols[t]]);
      }
    }
    if (drift < 1e-3) break;
  }
  for (int v = 0; v < prog.num_vars; ++v) s.col(v) = blk_scale(block_of[v]);
  return s;
}

Eigen::VectorXd apply_rows(const std::vector<ConicProgram::Row>& rows,
                           const Eigen::VectorXd& x) {
  Eigen::VectorXd out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double acc = 0.0;
    for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
      acc += rows[r].vals[t] * x(rows[r].cols[t]);
    }
    out(static_cast<int>(r)) = acc;
  }
  return out;
}

void apply_rows_transpose(const std::vector<ConicProgram::Row>& rows,
                          const Eigen::VectorXd& y, Eigen::VectorXd& out) {
  out.setZero();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double yr = y(static_cast<int>(r));
    for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
      out(rows[r].cols[t]) += rows[r].vals[t] * yr;
    }
  }
}

}  // namespace

SolverResult SplittingSolver::solve(const ConicProgram& prog,
                                    const SolverSettings& settings) const {
  settings.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const int n = prog.num_vars;
  const int m = static_cast<int>(prog.rows.size());

  // Scaled copy of the constraints.
  std::vector<ConicProgram::Row> rows = prog.rows;
  const Scaling sc = equilibrate(prog, rows, settings.equilibrate);
  Eigen::VectorXd b_scaled(m);
  for (int r = 0; r < m; ++r) b_scaled(r) = prog.rows[r].rhs * sc.row(r);
  Eigen::VectorXd c_scaled = prog.objective.cwiseProduct(sc.col);
  const Eigen::VectorXd b_orig = prog.rhs();
  const double b_norm = b_orig.norm();

  // Gram matrix of the scaled rows, factored once and reused.
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  if (m > 0) {
    std::vector<Eigen::Triplet<double>> trips;
    // Rows touching disjoint variables give a (block-)sparse Gram matrix;
    // build it through a column->rows index.
    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (int r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < rows[r].cols.size(); ++t) {
        by_col[rows[r].cols[t]].push_back({r, rows[r].vals[t]});
      }
    }
    std::map<std::pair<int, int>, double> entries;
    for (int c = 0; c < n; ++c) {
      for (const auto& [r1, v1] : by_col[c]) {
        for (const auto& [r2, v2] : by_col[c]) {
          if (r2 < r1) continue;
          entries[{r1, r2}] += v1 * v2;
        }
      }
    }
    trips.reserve(2 * entries.size());
    for (const auto& [key, v] : entries) {
      trips.emplace_back(key.first, key.second, v);
      if (key.first != key.second) trips.emplace_back(key.second, key.first, v);
    }
    Eigen::SparseMatrix<double> gram(m, m);
    gram.setFromTriplets(trips.begin(), trips.end());
    llt.compute(gram);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(
          "conic solver: factorization of the constraint Gram matrix failed "
          "(linearly dependent equality rows?)");
    }
  }

  double sigma = settings.step;
  const double relax = settings.relaxation;

  // Cone-feasible start: identity in every block.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < prog.cone_dims.size(); ++k) {
    const int dim = prog.cone_dims[k];
    z.segment(prog.cone_offsets[k], svec_dim(dim)) =
        svec(Eigen::MatrixXd::Identity(dim, dim));
  }
  // Start in scaled coordinates.
  z = z.cwiseQuotient(sc.col);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x(n), w(n), v(n), at_nu(n), nu(m), z_prev(n);

  // Snapshots for infeasibility certificates.
  Eigen::VectorXd nu_snap = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd x_snap = Eigen::VectorXd::Zero(n);

  SolverResult result;
  result.status = SolveStatus::MaxIters;

  double r_pri = 0.0, r_dual = 0.0;
  long iter = 0;
  for (iter = 1; iter <= settings.max_iters; ++iter) {
    // (a) projection onto the affine constraints
    w = z - u - c_scaled / sigma;
    if (m > 0) {
      nu = llt.solve(apply_rows(rows, w) - b_scaled);
      apply_rows_transpose(rows, nu, at_nu);
      x = w - at_nu;
    } else {
      nu.resize(0);
      x = w;
    }
    // (b) over-relaxed cone projection
    z_prev = z;
    v = relax * x + (1.0 - relax) * z + u;
    z = v;
    project_cones(prog, z);
    // (c) dual update
    u = v - z;

    const bool check = (iter % settings.check_every == 0) || iter == settings.max_iters;
    if (!check) continue;

    r_pri = (x - z).norm();
    r_dual = sigma * (z - z_prev).norm();
    if (!std::isfinite(r_pri) || !std::isfinite(r_dual)) {
      throw std::runtime_error("conic solver: iterates diverged to non-finite values");
    }
    const double eps_pri =
        settings.abs_feas + settings.rel_feas * std::max(x.norm(), z.norm());
    const double eps_dual = settings.abs_feas + settings.rel_feas * sigma * u.norm();

    // Unscaled affine feasibility of the cone-feasible iterate; this is the
    // quantity the reported Gram matrix inherits.
    const Eigen::VectorXd z_unscaled = z.cwiseProduct(sc.col);
    const double feas = (prog.apply_rows(z_unscaled) - b_orig).norm();
    const double eps_feas = settings.abs_feas + settings.rel_feas * (1.0 + b_norm);

    if (r_pri <= eps_pri && r_dual <= eps_dual && feas <= eps_feas) {
      result.status = SolveStatus::Optimal;
      break;
    }

    // Infeasibility certificates from the divergent directions.
    if (iter > settings.check_every) {
      const Eigen::VectorXd dnu = nu - nu_snap;
      const double b_dnu = b_scaled.dot(dnu);
      if (m > 0 && b_dnu < -1e-12) {
        Eigen::VectorXd y_hat = dnu / (-b_dnu);  // b^T y_hat = -1
        Eigen::VectorXd aty(n);
        apply_rows_transpose(rows, y_hat, aty);
        const double dist = cone_distance(prog, aty);
        if (dist <= settings.infeas_tol * std::max(1.0, aty.norm())) {
          result.status = SolveStatus::PrimalInfeasible;
          break;
        }
      }
      const Eigen::VectorXd dx = x - x_snap;
      const double c_dx = c_scaled.dot(dx);
      if (c_dx < -1e-12) {
        Eigen::VectorXd d_hat = dx / (-c_dx);  // c^T d_hat = -1
        const double norm_d = std::max(1.0, d_hat.norm());
        const double adist = (m > 0) ? apply_rows(rows, d_hat).norm() : 0.0;
        if (adist <= settings.infeas_tol * norm_d &&
            cone_distance(prog, d_hat) <= settings.infeas_tol * norm_d) {
          result.status = SolveStatus::DualInfeasible;
          break;
        }
      }
    }
    nu_snap = nu;
    x_snap = x;

    // Residual balancing keeps the two projection sequences on comparable
    // scales; u is the scaled dual, so it is rescaled with sigma.
    if (settings.adaptive_step && iter % (settings.check_every * 4) == 0) {
      if (r_pri > 10.0 * r_dual && sigma < 1e6) {
        sigma *= 2.0;
        u *= 0.5;
      } else if (r_dual > 10.0 * r_pri && sigma > 1e-6) {
        sigma *= 0.5;
        u *= 2.0;
      }
    }
  }
  result.iterations = std::min(iter, settings.max_iters);

  // Report in original coordinates; the primal point is the cone-feasible z.
  result.primal_vector = z.cwiseProduct(sc.col);
  result.dual_vector = Eigen::VectorXd(m);
  for (int r = 0; r < m; ++r) result.dual_vector(r) = -sigma * nu(r) * sc.row(r);
  result.primal_objective = prog.objective.dot(result.primal_vector);
  result.dual_objective = b_orig.dot(result.dual_vector);

  const double feas_final =
      m > 0 ? (prog.apply_rows(result.primal_vector) - b_orig).norm() : 0.0;
  result.residuals.primal = feas_final / (1.0 + b_norm);
  result.residuals.dual = r_dual / (1.0 + sigma * u.norm());
  result.residuals.gap =
      std::abs(result.primal_objective - result.dual_objective) /
      (1.0 + std::abs(result.primal_objective) + std::abs(result.dual_objective));
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

SolverResult solve(const ConicProgram& program, const SolverSettings& settings) {
  return SplittingSolver{}.solve(program, settings);
}

}  // namespace rotavg
