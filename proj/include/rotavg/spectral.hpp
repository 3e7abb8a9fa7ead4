#pragma once

#include <vector>

#include "rotavg/cost.hpp"

namespace rotavg {

// Block-diagonal degree matrix of the anisotropic measurement graph. The
// block of camera i accumulates the edge weight as seen from i: M for the
// lower endpoint of a stored pair and R~^T M R~ for the upper one, which is
// the same conjugation the measurement orientation swap induces.
struct DegreeMatrix {
  std::vector<Mat3> blocks;
};

DegreeMatrix degree_matrix(const std::vector<EdgeMeasurement>& edges, int n);

// Spectral baseline: with the raw (unscaled) block cost N and degree D the
// noise-free identity N R = D R holds, so the absolute rotations span the
// three smallest right singular vectors of D^-1 N - I. Those are computed
// from the symmetrized normal matrix, the reflection coset is fixed by the
// first block's determinant, and each block is projected to the nearest
// rotation.
// Throws on a disconnected graph or a singular degree block.
std::vector<Rotation> spectral_solve(const std::vector<EdgeMeasurement>& edges, int n);

}  // namespace rotavg
