#include <set>

#include "doctest.h"
#include "rotavg/sdp_model.hpp"

using namespace rotavg;

namespace {

std::vector<EdgeMeasurement> full_graph_edges(Rng& rng, const std::vector<Rotation>& gt,
                                              bool noise_free = true) {
  std::vector<EdgeMeasurement> edges;
  const int n = static_cast<int>(gt.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Mat3 rel = gt[i].matrix() * gt[j].matrix().transpose();
      if (!noise_free) rel = exp_map(0.05 * Vec3(rng.normal3())).matrix() * rel;
      const Mat3 q = random_rotation(rng).matrix();
      const Vec3 eigs(rng.uniform(1.0, 10.0), rng.uniform(1.0, 10.0), rng.uniform(1.0, 10.0));
      const Mat3 h = q * eigs.asDiagonal() * q.transpose();
      edges.push_back(
          EdgeMeasurement::make(i, j, Rotation::from_matrix_unchecked(rel), h));
    }
  }
  return edges;
}

// Feasible point planted from rotations: Gram block plus exact hull slacks.
Eigen::VectorXd planted_vector(const ConicProgram& prog, const std::vector<Rotation>& rots) {
  const int n = prog.n_cams;
  Eigen::MatrixXd stacked(3 * n, 3);
  for (int i = 0; i < n; ++i) stacked.middleRows<3>(3 * i) = rots[i].matrix();
  const Eigen::MatrixXd x = stacked * stacked.transpose();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(prog.num_vars);
  v.head(svec_dim(3 * n)) = svec(x);
  for (std::size_t k = 0; k < prog.slack_offset.size(); ++k) {
    const auto [i, j] = prog.edges[k];
    const Mat4 s = hull_operator(x.block<3, 3>(3 * i, 3 * j)) + Mat4::Identity();
    v.segment(prog.slack_offset[k], svec_dim(4)) = svec(s);
  }
  return v;
}

}  // namespace

TEST_CASE("svec: inner products and roundtrip") {
  Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    const int k = rng.uniform_int(1, 8);
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(k, k);
    Eigen::MatrixXd b = Eigen::MatrixXd::Random(k, k);
    a = (0.5 * (a + a.transpose())).eval();
    b = (0.5 * (b + b.transpose())).eval();
    CHECK(svec(a).dot(svec(b)) ==
          doctest::Approx((a.transpose() * b).trace()).epsilon(1e-12));
    CHECK((unsvec(svec(a), k) - a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(svec(a).norm() == doctest::Approx(a.norm()).epsilon(1e-12));
  }
}

TEST_CASE("build_program: dimensions for the two-camera case") {
  Rng rng(42);
  std::vector<Rotation> gt{random_rotation(rng), random_rotation(rng)};
  const auto edges = full_graph_edges(rng, gt);
  const CostMatrix cost = assemble_cost(edges, 2, CostMode::Isotropic);

  const ConicProgram o3 = build_program(cost, Formulation::O3Iso);
  CHECK(o3.cone_dims == std::vector<int>{6});
  CHECK(o3.num_vars == svec_dim(6));
  CHECK(o3.rows.size() == 12);

  const ConicProgram cso3 = build_program(cost, Formulation::CSo3Aniso);
  CHECK(cso3.cone_dims == std::vector<int>{6, 4});
  CHECK(cso3.num_vars == svec_dim(6) + svec_dim(4));
  CHECK(cso3.rows.size() == 12 + 10);
  CHECK(cso3.edges.size() == 1);
  CHECK(cso3.slack_offset.size() == 1);
}

TEST_CASE("build_program: rejects n < 2 and disconnected graphs") {
  Rng rng(43);
  std::vector<EdgeMeasurement> one{
      EdgeMeasurement::make(0, 1, random_rotation(rng), Mat3::Identity())};
  CHECK_THROWS_AS(build_program(assemble_cost(one, 4, CostMode::Isotropic), Formulation::O3Iso),
                  std::invalid_argument);

  const CostMatrix empty = assemble_cost({}, 1, CostMode::Isotropic);
  CHECK_THROWS_AS(build_program(empty, Formulation::O3Iso), std::invalid_argument);
}

TEST_CASE("build_program: planted solutions are feasible with matching objective") {
  Rng rng(44);
  std::vector<Rotation> gt;
  for (int i = 0; i < 4; ++i) gt.push_back(random_rotation(rng));
  const auto edges = full_graph_edges(rng, gt, false);

  for (Formulation f : {Formulation::O3Iso, Formulation::O3Aniso, Formulation::CSo3Iso,
                        Formulation::CSo3Aniso}) {
    const CostMode mode = (f == Formulation::O3Iso || f == Formulation::CSo3Iso)
                              ? CostMode::Isotropic
                              : CostMode::Anisotropic;
    const CostMatrix cost = assemble_cost(edges, 4, mode);
    const ConicProgram prog = build_program(cost, f);
    const Eigen::VectorXd v = planted_vector(prog, gt);

    // Exact feasibility of every equality row.
    CHECK((prog.apply_rows(v) - prog.rhs()).cwiseAbs().maxCoeff() < 1e-12);

    // Program objective equals the cost objective at the planted point.
    CHECK(prog.objective.dot(v) ==
          doctest::Approx(cost.objective_value(gt)).epsilon(1e-12));
  }
}

TEST_CASE("build_program: noise-free hull blocks are rotations, hence in the hull") {
  Rng rng(45);
  std::vector<Rotation> gt;
  for (int i = 0; i < 3; ++i) gt.push_back(random_rotation(rng));
  const auto edges = full_graph_edges(rng, gt, true);
  const CostMatrix cost = assemble_cost(edges, 3, CostMode::Anisotropic);
  const ConicProgram prog = build_program(cost, Formulation::CSo3Aniso);
  const Eigen::VectorXd v = planted_vector(prog, gt);
  const Eigen::MatrixXd x = extract_gram(prog, v);
  for (const auto& [i, j] : prog.edges) {
    CHECK(in_hull(x.block<3, 3>(3 * i, 3 * j), 1e-6));
  }
}

TEST_CASE("build_program: equality rows are structurally independent") {
  Rng rng(46);
  std::vector<Rotation> gt;
  for (int i = 0; i < 3; ++i) gt.push_back(random_rotation(rng));
  const auto edges = full_graph_edges(rng, gt);
  const CostMatrix cost = assemble_cost(edges, 3, CostMode::Anisotropic);
  const ConicProgram prog = build_program(cost, Formulation::CSo3Aniso);

  // Every row owns a variable no other row touches (its first column).
  std::set<int> leading;
  for (const auto& row : prog.rows) {
    REQUIRE(!row.cols.empty());
    CHECK(leading.insert(row.cols.front()).second);
  }
}

TEST_CASE("extract_gram: identity, planted roundtrip, symmetry") {
  Rng rng(47);
  std::vector<Rotation> gt;
  for (int i = 0; i < 4; ++i) gt.push_back(random_rotation(rng));
  const auto edges = full_graph_edges(rng, gt);
  const CostMatrix cost = assemble_cost(edges, 4, CostMode::Anisotropic);
  const ConicProgram prog = build_program(cost, Formulation::CSo3Aniso);

  Eigen::VectorXd ident = Eigen::VectorXd::Zero(prog.num_vars);
  ident.head(svec_dim(12)) = svec(Eigen::MatrixXd::Identity(12, 12));
  CHECK((extract_gram(prog, ident) - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() ==
        0.0);

  const Eigen::VectorXd v = planted_vector(prog, gt);
  Eigen::MatrixXd stacked(12, 3);
  for (int i = 0; i < 4; ++i) stacked.middleRows<3>(3 * i) = gt[i].matrix();
  CHECK((extract_gram(prog, v) - stacked * stacked.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // Output is exactly symmetric for any input vector.
  Eigen::VectorXd noise = Eigen::VectorXd::Random(prog.num_vars);
  const Eigen::MatrixXd x = extract_gram(prog, noise);
  CHECK((x - x.transpose()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(extract_gram(prog, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
