#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rotavg/cost.hpp"

namespace rotavg {

enum class SynthProtocol { Uniform, ToyThreeCam };

struct SynthConfig {
  int n_cams = 10;
  double edge_fraction = 1.0;              // p, each unordered pair kept independently
  std::pair<double, double> cov_eig_range = {0.01, 0.1};  // eigenvalues of H^-1
  std::uint64_t seed = 0;
  SynthProtocol protocol = SynthProtocol::Uniform;
  bool noise_free = false;  // keep the covariances but draw zero deviations
};

struct SyntheticInstance {
  std::vector<Rotation> ground_truth;
  std::vector<EdgeMeasurement> edges;
};

// Ground-truth rotations uniform on SO(3); per selected edge a random
// covariance H^-1 = Q L Q^T (Q uniform, L eigenvalues uniform in the
// configured range), a deviation drawn from N(0, H^-1) and the noisy
// relative rotation exp(hat(dw)) R_i R_j^T. The edge set keeps each pair
// with probability p and is resampled (then completed with a random
// spanning tree) until connected.
SyntheticInstance generate(const SynthConfig& config);

// Three-camera triangle: edges (0,1) and (1,2) carry isotropic noise
// covariance eps*I, edge (0,2) carries diag with sigma on the chosen axis
// (0=x, 1=y, 2=z) and eps elsewhere. Hessians are the covariance inverses.
SyntheticInstance toy_three_cam(double sigma, int axis, double eps = 0.001,
                                std::uint64_t seed = 0);

// Zero-mean Gaussian draw with covariance F F^T.
Vec3 sample_gaussian(Rng& rng, const Mat3& cov_factor);

}  // namespace rotavg
