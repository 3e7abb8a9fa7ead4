#pragma once

#include <map>
#include <vector>

#include "rotavg/so3.hpp"

namespace rotavg {

// One relative-orientation measurement between cameras i and j together
// with the 3x3 curvature of the two-view objective at the estimate.
struct EdgeMeasurement {
  int i = 0;
  int j = 0;
  Rotation r_tilde = Rotation::identity();
  Mat3 h = Mat3::Zero();  // symmetric PSD, axis-angle coordinates

  static constexpr double kSymTol = 1e-9;
  static constexpr double kPsdTol = 1e-9;

  // Throws std::invalid_argument when i == j, h is asymmetric, or h has an
  // eigenvalue below -kPsdTol.
  static EdgeMeasurement make(int i, int j, const Rotation& r_tilde, const Mat3& h);
};

// The 3x3 weight turning a curvature matrix into a linear cost coefficient:
// M = tr(H)/2 * I - H. For PSD H the sorted eigenvalues satisfy
// l1 >= l2 >= |l3|; l3 going negative is what breaks O(3)-only relaxations.
struct WeightMatrix {
  Mat3 m;
  Vec3 eigenvalues_desc() const;  // sorted descending
};

WeightMatrix weight_from_hessian(const Mat3& h);

// Exact inverse of weight_from_hessian.
inline Mat3 hessian_from_weight(const WeightMatrix& w) {
  return w.m.trace() * Mat3::Identity() - w.m;
}

bool is_indefinite(const WeightMatrix& m, double tol = 1e-10);

// Max residual, over `trials` random axis-angle vectors v, of
// |v^T h v - tr(hat(v)^T M hat(v))| with M = weight_from_hessian(h),
// maximized with the residual of the 9x3 Jacobian identity
// J^T (I kron M) J = h. Both are zero in exact arithmetic.
double quadform_identity_check(const Mat3& h, int trials);

// The fixed 9x3 Jacobian of v -> vec(I + hat(v)) with column-major vec.
Eigen::Matrix<double, 9, 3> hat_jacobian();

// Stationary-point analysis of the single measurement term
// f(R) = -<M r_tilde, R> + <M r_tilde, r_tilde> over SO(3) and O(3).
// All candidates have the form U S U^T r_tilde with S = diag(+-1); the
// determinant-free search admits S = diag(1,1,-1), which wins by 2|l3|
// whenever M is indefinite.
struct SingleTermMinimizers {
  Rotation so3_minimizer = Rotation::identity();
  double so3_value = 0.0;
  Mat3 o3_minimizer = Mat3::Identity();
  double o3_value = 0.0;
  bool degenerate = false;  // |l2 - |l3|| tie: minimizer not unique
};

SingleTermMinimizers single_term_minimizers(const WeightMatrix& m, const Rotation& r_tilde);

enum class CostMode { Isotropic, Anisotropic };

// Symmetric 3n x 3n block cost with zero diagonal blocks. The stored block
// for a measured pair (i, j), i < j, is (M_ij r_tilde_ij)^T divided by the
// assembly scale; block(j, i) is its transpose. The coefficient pairing
// against a Gram matrix X (with X_ij = R_i R_j^T) uses block(i, j)^T, see
// objective_value() and sdp_coefficient().
class CostMatrix {
 public:
  struct Block {
    int i = 0;
    int j = 0;     // i < j
    Mat3 b;        // (M r_tilde)^T / scale
  };

  int n_cams() const { return n_cams_; }
  double scale() const { return scale_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  bool has_edge(int i, int j) const;
  // Zero for the diagonal and unmeasured pairs.
  Mat3 block(int i, int j) const;

  // -sum_{i != j} <block(i,j)^T, R_i R_j^T>; each measured pair contributes
  // twice by block symmetry.
  double objective_value(const std::vector<Rotation>& rotations) const;

  // Dense symmetric C with C_ij = block(i,j)^T, so that
  // <C, R R^T> = -objective_value(rotations).
  Eigen::MatrixXd sdp_coefficient() const;

  friend CostMatrix assemble_cost(const std::vector<EdgeMeasurement>&, int, CostMode, double);

 private:
  int n_cams_ = 0;
  double scale_ = 1.0;
  std::vector<Block> blocks_;                // sorted by (i, j)
  std::map<std::pair<int, int>, int> index_; // (i, j) with i < j -> blocks_ index
};

// Builds the cost from measurements. In anisotropic mode each edge uses
// M = weight_from_hessian(H) and the whole matrix is divided by the mean of
// the largest Hessian eigenvalue across edges; isotropic mode uses M = I and
// scale 1. For alpha in (0, 1] the weighted coefficient is
// r_tilde^alpha M r_tilde^(1-alpha) (fractional powers via log/exp), which
// reduces to M r_tilde at alpha = 0.
// Throws on duplicate pairs, out-of-range indices, or alpha outside [0, 1].
CostMatrix assemble_cost(const std::vector<EdgeMeasurement>& edges, int n,
                         CostMode mode, double alpha = 0.0);

inline double objective_value(const CostMatrix& cost, const std::vector<Rotation>& rotations) {
  return cost.objective_value(rotations);
}

// Fraction (in percent) of edges whose anisotropic weight is indefinite.
double percent_indefinite(const std::vector<EdgeMeasurement>& edges);

}  // namespace rotavg
