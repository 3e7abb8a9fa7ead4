#include "doctest.h"
#include "rotavg/eval.hpp"
#include "rotavg/rounding.hpp"
#include "rotavg/synth.hpp"

using namespace rotavg;

namespace {

Eigen::MatrixXd planted_gram(const std::vector<Rotation>& rots) {
  const int n = static_cast<int>(rots.size());
  Eigen::MatrixXd stacked(3 * n, 3);
  for (int i = 0; i < n; ++i) stacked.middleRows<3>(3 * i) = rots[i].matrix();
  return stacked * stacked.transpose();
}

std::vector<Rotation> random_rotations(Rng& rng, int n) {
  std::vector<Rotation> out;
  for (int i = 0; i < n; ++i) out.push_back(random_rotation(rng));
  return out;
}

}  // namespace

TEST_CASE("estimate_rank: frozen cases") {
  CHECK(estimate_rank(Eigen::MatrixXd::Identity(12, 12)) == 12);

  Rng rng(61);
  const Eigen::MatrixXd x = planted_gram(random_rotations(rng, 4));
  CHECK(estimate_rank(x) == 3);

  // PSD noise at 1e-6 stays below the 0.1% energy threshold.
  Eigen::MatrixXd noise = Eigen::MatrixXd::Random(12, 12);
  noise = (noise * noise.transpose()).eval();
  CHECK(estimate_rank(x + 1e-6 * noise) == 3);

  CHECK(estimate_rank(Eigen::MatrixXd::Zero(6, 6)) == 0);
}

TEST_CASE("estimate_rank: scaling invariance") {
  Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(9, 9);
    m = (m * m.transpose()).eval();
    const int r = estimate_rank(m);
    CHECK(estimate_rank(17.3 * m) == r);
    CHECK(estimate_rank(1e-6 * m) == r);
  }
}

TEST_CASE("round_to_rotations: exact planted Gram matrix") {
  Rng rng(63);
  const auto gt = random_rotations(rng, 5);
  const RoundedRotations r = round_to_rotations(planted_gram(gt));
  CHECK(!r.degenerate);
  for (double det : r.block_det) CHECK(det > 0.0);
  CHECK(chordal_error(gt, r.rotations) < 1e-9);
}

TEST_CASE("round_to_rotations: block identity input stays valid") {
  // Fully degenerate spectrum: the factor choice is arbitrary, the contract
  // is that every returned matrix is still a rotation.
  const RoundedRotations r = round_to_rotations(Eigen::MatrixXd::Identity(9, 9));
  CHECK(r.rotations.size() == 3);
  for (const Rotation& rot : r.rotations) {
    CHECK(Rotation::is_rotation(rot.matrix(), 1e-9));
  }
}

TEST_CASE("round_to_rotations: near-zero third eigenvalue flags degeneracy") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(6, 6);
  x(0, 0) = 1.0;
  x(1, 1) = 1.0;  // rank 2
  const RoundedRotations r = round_to_rotations(x);
  CHECK(r.degenerate);
  for (const Rotation& rot : r.rotations) {
    CHECK(Rotation::is_rotation(rot.matrix(), 1e-9));
  }
}

TEST_CASE("round_to_rotations: reflected factor is pulled back into SO(3)") {
  Rng rng(64);
  const auto gt = random_rotations(rng, 4);
  // X built from reflected blocks R_i F has the same Gram matrix, so the
  // rounded result must still be a consistent rotation family.
  const Eigen::MatrixXd x = planted_gram(gt);
  const RoundedRotations r = round_to_rotations(x);
  for (double det : r.block_det) CHECK(det > 0.5);
  CHECK(chordal_error(gt, r.rotations) < 1e-9);
}

TEST_CASE("certify: noise-free instance is tight, perturbed O3 bound stays below") {
  Rng rng(65);
  SynthConfig cfg;
  cfg.n_cams = 4;
  cfg.edge_fraction = 1.0;
  cfg.cov_eig_range = {0.05, 0.1};
  cfg.seed = 19;
  cfg.noise_free = true;
  const SyntheticInstance inst = generate(cfg);
  const CostMatrix cost = assemble_cost(inst.edges, 4, CostMode::Anisotropic);
  const ConicProgram prog = build_program(cost, Formulation::CSo3Aniso);
  SolverSettings settings;
  settings.max_iters = 200000;
  const SolverResult solved = solve(prog, settings);
  REQUIRE(solved.status == SolveStatus::Optimal);

  std::vector<Rotation> rounded;
  const Certificate cert = certify(cost, prog, solved, 1e-4, 0.999, &rounded);
  CHECK(cert.rank_estimate == 3);
  CHECK(cert.tight);
  CHECK(cert.relative_gap <= 1e-4);
  CHECK(cert.rounded_cost >=
        cert.sdp_lower_bound - 10.0 * settings.abs_feas * (1.0 + std::abs(cert.sdp_lower_bound)));
  CHECK(chordal_error(inst.ground_truth, rounded) < 1e-3);

  SolverResult not_optimal = solved;
  not_optimal.status = SolveStatus::MaxIters;
  CHECK_THROWS_AS(certify(cost, prog, not_optimal), std::invalid_argument);
}
