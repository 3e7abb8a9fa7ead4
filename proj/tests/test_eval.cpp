#include <cmath>

#include "doctest.h"
#include "rotavg/eval.hpp"

using namespace rotavg;

namespace {

std::vector<Rotation> random_rotations(Rng& rng, int n) {
  std::vector<Rotation> out;
  for (int i = 0; i < n; ++i) out.push_back(random_rotation(rng));
  return out;
}

std::vector<Rotation> apply_gauge(const std::vector<Rotation>& rots, const Rotation& g) {
  std::vector<Rotation> out;
  for (const Rotation& r : rots) out.push_back(r * g);
  return out;
}

}  // namespace

TEST_CASE("chordal_error: zero cases and the half-turn pair") {
  Rng rng(81);
  const auto gt = random_rotations(rng, 5);
  CHECK(chordal_error(gt, gt) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(chordal_error(gt, apply_gauge(gt, random_rotation(rng))) < 1e-9);

  // Two cameras, one relative half turn: no gauge can absorb it and the
  // total chordal distance is 2*sqrt(2).
  const auto base = random_rotations(rng, 2);
  const Rotation half_z =
      Rotation::from_matrix(Eigen::Vector3d(-1, -1, 1).asDiagonal());
  std::vector<Rotation> est{base[0],
                            Rotation::from_matrix_unchecked(base[1].matrix() * half_z.matrix())};
  CHECK(chordal_error(base, est) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("chordal_error: bounded by 8n and gauge invariant") {
  Rng rng(82);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(2, 8);
    const auto gt = random_rotations(rng, n);
    const auto est = random_rotations(rng, n);
    const double err = chordal_error(gt, est);
    CHECK(err * err <= 8.0 * n + 1e-9);
    const double gauged = chordal_error(gt, apply_gauge(est, random_rotation(rng)));
    CHECK(std::abs(gauged - err) < 1e-9);
  }
}

TEST_CASE("mahalanobis_error: zero, sign branch, isotropic reduction") {
  Rng rng(83);
  const auto gt = random_rotations(rng, 3);
  std::vector<EdgeMeasurement> edges;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Rotation rel =
          Rotation::from_matrix_unchecked(gt[i].matrix() * gt[j].matrix().transpose());
      edges.push_back(EdgeMeasurement::make(i, j, rel, Mat3::Identity()));
    }
  }
  CHECK(mahalanobis_error(gt, gt, edges) == doctest::Approx(0.0).epsilon(1e-12));

  // Inverted estimate exp(-w*) = gt^T picks the plus branch, contributing 0.
  std::vector<Rotation> flipped = gt;
  flipped[1] = gt[1].transposed();
  std::vector<Rotation> only_one{gt[0], flipped[1], gt[2]};
  const double err = mahalanobis_error(gt, only_one, edges);
  CHECK(err == doctest::Approx(0.0).epsilon(1e-9));

  // With identity H_i the metric reduces to the axis-angle formula.
  Rng rng2(84);
  const auto est = random_rotations(rng2, 3);
  std::vector<EdgeMeasurement> single{edges[0]};  // H_0 = H_1 = I, H_2 = 0
  double direct = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vec3 w = log_map(est[i]).v;
    const Vec3 ws = log_map(gt[i]).v;
    direct += std::min((w - ws).squaredNorm(), (w + ws).squaredNorm());
  }
  CHECK(mahalanobis_error(gt, est, single) == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
}

TEST_CASE("mahalanobis_error: scales as sqrt(c) when every Hessian is c I") {
  Rng rng(85);
  const auto gt = random_rotations(rng, 4);
  const auto est = random_rotations(rng, 4);
  const double c = 5.3;
  std::vector<EdgeMeasurement> unit, scaled;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Rotation rel =
          Rotation::from_matrix_unchecked(gt[i].matrix() * gt[j].matrix().transpose());
      unit.push_back(EdgeMeasurement::make(i, j, rel, Mat3::Identity()));
      scaled.push_back(EdgeMeasurement::make(i, j, rel, c * Mat3::Identity()));
    }
  }
  CHECK(mahalanobis_error(gt, est, scaled) ==
        doctest::Approx(std::sqrt(c) * mahalanobis_error(gt, est, unit)).epsilon(1e-10));
}

TEST_CASE("rms_angular_error: zero, gauge invariance") {
  Rng rng(86);
  const auto gt = random_rotations(rng, 4);
  CHECK(rms_angular_error(gt, gt) == doctest::Approx(0.0).epsilon(1e-12));
  const auto est = random_rotations(rng, 4);
  const double err = rms_angular_error(gt, est);
  CHECK(err >= 0.0);
  CHECK(std::abs(rms_angular_error(gt, apply_gauge(est, random_rotation(rng))) - err) < 1e-9);
}

TEST_CASE("rms_angular_error: balanced +-2 degree deviations stay put under alignment") {
  // Two cameras +2 degrees, two cameras -2 degrees about the same axis: the
  // Procrustes sum is a scalar multiple of the identity projection, so the
  // optimal gauge is exactly I and half the cameras are off by 2 degrees:
  // rms = sqrt(2^2 / 2) = sqrt(2).
  Rng rng(87);
  const auto gt = random_rotations(rng, 4);
  const double two_deg = 2.0 * M_PI / 180.0;
  const Vec3 axis = Vec3(0.3, -1.1, 0.4).normalized();
  std::vector<Rotation> est{
      gt[0], gt[1],
      Rotation::from_matrix_unchecked(gt[2].matrix() * exp_map(two_deg * axis).matrix()),
      Rotation::from_matrix_unchecked(gt[3].matrix() * exp_map(-two_deg * axis).matrix())};

  const GaugeAlignment ga = align_gauge(est, gt);
  CHECK((ga.v.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rms_angular_error(gt, est) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("rms_angular_error: two cameras, one deviated, alignment splits the angle") {
  // A single 2-degree deviation on one of two cameras is halved by the
  // chordal-optimal gauge (the Procrustes factor is the geodesic midpoint),
  // leaving both cameras 1 degree off.
  Rng rng(88);
  const auto gt = random_rotations(rng, 2);
  const double two_deg = 2.0 * M_PI / 180.0;
  const Vec3 axis = Vec3(1.0, 0.5, -0.25).normalized();
  std::vector<Rotation> est{
      gt[0],
      Rotation::from_matrix_unchecked(gt[1].matrix() * exp_map(two_deg * axis).matrix())};
  CHECK(rms_angular_error(gt, est) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("evaluate: bundles all three metrics") {
  Rng rng(89);
  const auto gt = random_rotations(rng, 3);
  std::vector<EdgeMeasurement> edges;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Rotation rel =
          Rotation::from_matrix_unchecked(gt[i].matrix() * gt[j].matrix().transpose());
      edges.push_back(EdgeMeasurement::make(i, j, rel, Mat3::Identity()));
    }
  }
  const MetricsReport report = evaluate(gt, gt, edges, "test", 1.5);
  CHECK(report.chordal_err == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.mahalanobis_err == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.rms_angular_deg == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.method == "test");
  CHECK(report.runtime_s == 1.5);
}
