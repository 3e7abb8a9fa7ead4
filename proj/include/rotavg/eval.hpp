#pragma once

#include <string>
#include <vector>

#include "rotavg/cost.hpp"

namespace rotavg {

// Gauge-aligned chordal distance sqrt(sum_i |est_i V - gt_i|_F^2) with V the
// Procrustes-optimal global rotation.
double chordal_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est);

// Mahalanobis distance between axis-angle vectors, weighting camera i by
// H_i = sum of the Hessians of its incident edges; the sign ambiguity of the
// axis-angle representation is absorbed by minimizing over the two branches.
// Expects gauge-aligned estimates (apply align_gauge first); the pipeline
// aligns with the chordal-optimal V.
double mahalanobis_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est,
                         const std::vector<EdgeMeasurement>& edges);

// Root-mean-square per-camera rotation angle after gauge alignment, degrees.
double rms_angular_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est);

struct MetricsReport {
  double chordal_err = 0.0;
  double mahalanobis_err = 0.0;
  double rms_angular_deg = 0.0;
  double runtime_s = 0.0;
  std::string method;
};

MetricsReport evaluate(const std::vector<Rotation>& gt, const std::vector<Rotation>& est,
                       const std::vector<EdgeMeasurement>& edges, const std::string& method,
                       double runtime_s);

}  // namespace rotavg
