#include "rotavg/sdp_model.hpp"

#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace rotavg {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int k = static_cast<int>(m.rows());
  Eigen::VectorXd v(svec_dim(k));
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r <= c; ++r) {
      v(svec_index(r, c)) = (r == c) ? m(r, c) : kSqrt2 * m(r, c);
    }
  }
  return v;
}

Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int k) {
  if (v.size() != svec_dim(k)) {
    throw std::invalid_argument("unsvec: vector length does not match matrix size");
  }
  Eigen::MatrixXd m(k, k);
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r <= c; ++r) {
      const double x = v(svec_index(r, c));
      if (r == c) {
        m(r, c) = x;
      } else {
        m(r, c) = x / kSqrt2;
        m(c, r) = m(r, c);
      }
    }
  }
  return m;
}

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::O3Iso: return "o3-iso";
    case Formulation::O3Aniso: return "o3-aniso";
    case Formulation::CSo3Iso: return "cso3-iso";
    case Formulation::CSo3Aniso: return "cso3-aniso";
  }
  return "?";
}

Eigen::VectorXd ConicProgram::apply_rows(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double acc = 0.0;
    const Row& row = rows[r];
    for (std::size_t t = 0; t < row.cols.size(); ++t) acc += row.vals[t] * x(row.cols[t]);
    out(static_cast<int>(r)) = acc;
  }
  return out;
}

Eigen::VectorXd ConicProgram::apply_rows_transpose(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_vars);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    const double yr = y(static_cast<int>(r));
    for (std::size_t t = 0; t < row.cols.size(); ++t) out(row.cols[t]) += row.vals[t] * yr;
  }
  return out;
}

Eigen::VectorXd ConicProgram::rhs() const {
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) b(static_cast<int>(r)) = rows[r].rhs;
  return b;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Coefficients of the hull operator: entry (p, q) of A(Y) is the signed sum
// of the listed Y entries.
struct HullTerm {
  int a, b;    // Y entry
  double sign;
};

const std::vector<HullTerm>& hull_terms(int p, int q) {
  // Upper triangle of the 4x4 map, (p <= q).
  static const std::vector<HullTerm> table[4][4] = {
      {{{0, 0, -1}, {1, 1, -1}, {2, 2, 1}},   // (0,0)
       {{0, 2, 1}, {2, 0, 1}},                // (0,1)
       {{0, 1, 1}, {1, 0, -1}},               // (0,2)
       {{1, 2, 1}, {2, 1, 1}}},               // (0,3)
      {{},
       {{0, 0, 1}, {1, 1, -1}, {2, 2, -1}},   // (1,1)
       {{1, 2, 1}, {2, 1, -1}},               // (1,2)
       {{0, 1, 1}, {1, 0, 1}}},               // (1,3)
      {{},
       {},
       {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}},     // (2,2)
       {{2, 0, 1}, {0, 2, -1}}},               // (2,3)
      {{},
       {},
       {},
       {{0, 0, -1}, {1, 1, 1}, {2, 2, -1}}},  // (3,3)
  };
  return table[p][q];
}

// Drops rows identical to an earlier row (same columns, values, rhs).
// A repeated coefficient pattern with a conflicting rhs is an infeasible
// construction and rejected outright.
void deduplicate_rows(std::vector<ConicProgram::Row>& rows) {
  auto hash_row = [](const ConicProgram::Row& row) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (int c : row.cols) mix(static_cast<std::uint64_t>(c));
    for (double v : row.vals) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      mix(bits);
    }
    return h;
  };

  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  std::vector<ConicProgram::Row> unique_rows;
  unique_rows.reserve(rows.size());
  for (auto& row : rows) {
    const std::uint64_t h = hash_row(row);
    bool dup = false;
    for (int idx : buckets[h]) {
      const auto& kept = unique_rows[idx];
      if (kept.cols == row.cols && kept.vals == row.vals) {
        if (kept.rhs != row.rhs) {
          throw std::invalid_argument("build_program: contradictory duplicate equality rows");
        }
        dup = true;
        break;
      }
    }
    if (!dup) {
      buckets[h].push_back(static_cast<int>(unique_rows.size()));
      unique_rows.push_back(std::move(row));
    }
  }
  rows.swap(unique_rows);
}

}  // namespace

ConicProgram build_program(const CostMatrix& cost, Formulation formulation) {
  const int n = cost.n_cams();
  if (n < 2) throw std::invalid_argument("build_program: need at least two cameras");

  UnionFind uf(n);
  for (const auto& e : cost.blocks()) uf.unite(e.i, e.j);
  for (int i = 1; i < n; ++i) {
    if (uf.find(i) != uf.find(0)) {
      throw std::invalid_argument("build_program: measurement graph is disconnected");
    }
  }

  ConicProgram prog;
  prog.n_cams = n;
  const int d = 3 * n;
  prog.cone_dims.push_back(d);
  prog.cone_offsets.push_back(0);
  prog.num_vars = svec_dim(d);

  const bool hull = has_hull_constraints(formulation);
  if (hull) {
    for (const auto& e : cost.blocks()) {
      prog.edges.emplace_back(e.i, e.j);
      prog.slack_offset.push_back(prog.num_vars);
      prog.cone_dims.push_back(4);
      prog.cone_offsets.push_back(prog.num_vars);
      prog.num_vars += svec_dim(4);
    }
  } else {
    for (const auto& e : cost.blocks()) prog.edges.emplace_back(e.i, e.j);
  }

  // Objective: minimize -<C, X> with C the symmetric coefficient matrix.
  prog.objective = Eigen::VectorXd::Zero(prog.num_vars);
  prog.objective.head(svec_dim(d)) = svec(-cost.sdp_coefficient());

  // X_ii = I, six rows per camera on the diagonal block.
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      ConicProgram::Row row;
      row.cols = {prog.gram_var(3 * i + a, 3 * i + a)};
      row.vals = {1.0};
      row.rhs = 1.0;
      prog.rows.push_back(std::move(row));
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        ConicProgram::Row row;
        row.cols = {prog.gram_var(3 * i + a, 3 * i + b)};
        row.vals = {1.0};
        row.rhs = 0.0;
        prog.rows.push_back(std::move(row));
      }
    }
  }

  // Hull ties: svec components of  S_e - A(X_ij) = I  for each measured edge.
  if (hull) {
    for (std::size_t k = 0; k < prog.edges.size(); ++k) {
      const auto [i, j] = prog.edges[k];
      const int s_off = prog.slack_offset[k];
      for (int q = 0; q < 4; ++q) {
        for (int p = 0; p <= q; ++p) {
          ConicProgram::Row row;
          row.cols.push_back(s_off + svec_index(p, q));
          row.vals.push_back(1.0);
          const double y_coeff = (p == q) ? -1.0 / kSqrt2 : -1.0;
          for (const HullTerm& t : hull_terms(p, q)) {
            // Y_ab = X(3i+a, 3j+b), always strictly above the diagonal.
            row.cols.push_back(prog.gram_var(3 * i + t.a, 3 * j + t.b));
            row.vals.push_back(y_coeff * t.sign);
          }
          row.rhs = (p == q) ? 1.0 : 0.0;
          prog.rows.push_back(std::move(row));
        }
      }
    }
  }

  deduplicate_rows(prog.rows);
  return prog;
}

Eigen::MatrixXd extract_gram(const ConicProgram& program, const Eigen::VectorXd& solution) {
  if (solution.size() != program.num_vars) {
    throw std::invalid_argument("extract_gram: solution vector has wrong dimension");
  }
  const int d = 3 * program.n_cams;
  Eigen::MatrixXd x = unsvec(solution.head(svec_dim(d)), d);
  return 0.5 * (x + x.transpose());
}

}  // namespace rotavg
