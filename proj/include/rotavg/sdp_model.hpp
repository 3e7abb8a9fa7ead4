#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rotavg/cost.hpp"

namespace rotavg {

// Symmetric vectorization, documented bit-exactly because the conic solver
// and the model builder must agree on it:
//
//   svec(M) for a k x k symmetric M is the length k(k+1)/2 vector holding
//   the upper triangle in column-major order,
//     index(r, c) = c (c + 1) / 2 + r        for 0 <= r <= c < k,
//   with entries
//     svec(M)[index(r, c)] = M(r, c)         if r == c,
//                          = sqrt(2) M(r, c) if r <  c.
//
// With this scaling <svec(A), svec(B)> equals the Frobenius inner product
// <A, B> and Euclidean projection in svec coordinates is Frobenius-nearest
// projection on matrices.
inline int svec_dim(int k) { return k * (k + 1) / 2; }
inline int svec_index(int r, int c) { return c * (c + 1) / 2 + r; }  // r <= c

Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int k);

enum class Formulation { O3Iso, O3Aniso, CSo3Iso, CSo3Aniso };

inline bool has_hull_constraints(Formulation f) {
  return f == Formulation::CSo3Iso || f == Formulation::CSo3Aniso;
}
const char* formulation_name(Formulation f);

// Standard-form cone program
//   minimize  <objective, x>   s.t.  equalities: A x = b,   x in K,
// where K is a product of PSD cones, each block stored in svec coordinates.
// Block 0 is always the 3n x 3n Gram variable; the hull formulations append
// one 4 x 4 slack block per measured edge, tied to the Gram off-diagonal
// block by the 10 rows of  S - A(X_ij) = I  in svec components.
struct ConicProgram {
  struct Row {
    std::vector<int> cols;
    std::vector<double> vals;
    double rhs = 0.0;
  };

  int n_cams = 0;
  std::vector<int> cone_dims;      // matrix side length per PSD block
  std::vector<int> cone_offsets;   // start of each block in the variable vector
  int num_vars = 0;

  Eigen::VectorXd objective;       // c
  std::vector<Row> rows;           // A, b

  // Measured pairs (i < j) in slack-block order; index_map from edge k to
  // the variable offset of its slack block (empty for O(3) formulations).
  std::vector<std::pair<int, int>> edges;
  std::vector<int> slack_offset;

  // Variable position of Gram entry (a, b) of the full 3n x 3n matrix.
  int gram_var(int a, int b) const {
    return a <= b ? svec_index(a, b) : svec_index(b, a);
  }

  Eigen::VectorXd apply_rows(const Eigen::VectorXd& x) const;       // A x
  Eigen::VectorXd apply_rows_transpose(const Eigen::VectorXd& y) const;  // A^T y
  Eigen::VectorXd rhs() const;
};

// Encodes one of the four relaxations over the given cost. Requires n >= 2
// and a connected measurement graph (union-find check); throws otherwise.
// Only measured edges receive hull constraints.
ConicProgram build_program(const CostMatrix& cost, Formulation formulation);

// Reassembles the Gram matrix from the leading cone block of a solution
// vector and symmetrizes it. Throws on dimension mismatch.
Eigen::MatrixXd extract_gram(const ConicProgram& program, const Eigen::VectorXd& solution);

}  // namespace rotavg
