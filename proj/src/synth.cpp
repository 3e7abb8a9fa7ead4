#include "rotavg/synth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace rotavg {

Vec3 sample_gaussian(Rng& rng, const Mat3& cov_factor) {
  return cov_factor * rng.normal3();
}

namespace {

bool connected(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [i, j] : pairs) parent[find(i)] = find(j);
  for (int i = 1; i < n; ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> sample_edge_set(Rng& rng, int n, double p) {
  std::vector<std::pair<int, int>> pairs;
  for (int attempt = 0; attempt < 100; ++attempt) {
    pairs.clear();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform01() < p) pairs.emplace_back(i, j);
      }
    }
    if (connected(n, pairs)) return pairs;
  }
  // Complete with a random spanning tree over a shuffled camera order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  for (int k = 1; k < n; ++k) {
    int a = order[k];
    int b = order[rng.uniform_int(0, k - 1)];
    if (a > b) std::swap(a, b);
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) == pairs.end()) {
      pairs.emplace_back(a, b);
    }
  }
  if (!connected(n, pairs)) {
    throw std::runtime_error("generate: failed to build a connected edge set");
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

SyntheticInstance generate(const SynthConfig& config) {
  const auto [lo, hi] = config.cov_eig_range;
  if (config.n_cams < 2) throw std::invalid_argument("generate: need at least two cameras");
  if (config.edge_fraction <= 0.0 || config.edge_fraction > 1.0) {
    throw std::invalid_argument("generate: edge fraction must lie in (0, 1]");
  }
  if (lo <= 0.0 || hi < lo) {
    throw std::invalid_argument("generate: covariance eigenvalue range must satisfy 0 < lo <= hi");
  }
  if (config.protocol == SynthProtocol::ToyThreeCam) {
    throw std::invalid_argument("generate: toy protocol is built by toy_three_cam()");
  }

  Rng rng(config.seed);
  SyntheticInstance out;
  out.ground_truth.reserve(config.n_cams);
  for (int i = 0; i < config.n_cams; ++i) out.ground_truth.push_back(random_rotation(rng));

  const auto pairs = sample_edge_set(rng, config.n_cams, config.edge_fraction);
  out.edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const Mat3 q = random_rotation(rng).matrix();
    Vec3 cov_eigs;  // eigenvalues of H^-1
    for (int k = 0; k < 3; ++k) cov_eigs(k) = rng.uniform(lo, hi);
    const Mat3 hess = q * cov_eigs.cwiseInverse().asDiagonal() * q.transpose();
    const Mat3 cov_factor = q * cov_eigs.cwiseSqrt().asDiagonal() * q.transpose();

    Vec3 dw = Vec3::Zero();
    if (!config.noise_free) dw = sample_gaussian(rng, cov_factor);
    const Mat3 rel =
        out.ground_truth[i].matrix() * out.ground_truth[j].matrix().transpose();
    const Rotation r_tilde =
        Rotation::from_matrix_unchecked(exp_map(AxisAngle{dw}).matrix() * rel);
    out.edges.push_back(EdgeMeasurement::make(i, j, r_tilde, hess));
  }
  return out;
}

SyntheticInstance toy_three_cam(double sigma, int axis, double eps, std::uint64_t seed) {
  if (sigma <= 0.0 || eps <= 0.0) {
    throw std::invalid_argument("toy_three_cam: sigma and eps must be positive");
  }
  if (axis < 0 || axis > 2) throw std::invalid_argument("toy_three_cam: axis must be 0, 1 or 2");

  Rng rng(seed);
  SyntheticInstance out;
  for (int i = 0; i < 3; ++i) out.ground_truth.push_back(random_rotation(rng));

  auto make_edge = [&](int i, int j, const Vec3& cov_diag) {
    const Mat3 hess = cov_diag.cwiseInverse().asDiagonal();
    const Mat3 cov_factor = cov_diag.cwiseSqrt().asDiagonal();
    const Vec3 dw = sample_gaussian(rng, cov_factor);
    const Mat3 rel =
        out.ground_truth[i].matrix() * out.ground_truth[j].matrix().transpose();
    const Rotation r_tilde =
        Rotation::from_matrix_unchecked(exp_map(AxisAngle{dw}).matrix() * rel);
    out.edges.push_back(EdgeMeasurement::make(i, j, r_tilde, hess));
  };

  const Vec3 iso(eps, eps, eps);
  Vec3 aniso(eps, eps, eps);
  aniso(axis) = sigma;
  make_edge(0, 1, iso);
  make_edge(1, 2, iso);
  make_edge(0, 2, aniso);  // the uncertain edge
  return out;
}

}  // namespace rotavg
