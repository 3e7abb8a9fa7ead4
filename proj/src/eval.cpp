#include "rotavg/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace rotavg {

double chordal_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est) {
  const GaugeAlignment ga = align_gauge(est, gt);
  double acc = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    acc += (ga.aligned[i].matrix() - gt[i].matrix()).squaredNorm();
  }
  return std::sqrt(acc);
}

double mahalanobis_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est,
                         const std::vector<EdgeMeasurement>& edges) {
  if (gt.size() != est.size()) {
    throw std::invalid_argument("mahalanobis_error: list lengths differ");
  }
  std::vector<Mat3> hi(gt.size(), Mat3::Zero());
  for (const EdgeMeasurement& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= static_cast<int>(gt.size()) ||
        e.j >= static_cast<int>(gt.size())) {
      throw std::invalid_argument("mahalanobis_error: edge index out of range");
    }
    hi[e.i] += e.h;
    hi[e.j] += e.h;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const Vec3 w = log_map(est[i]).v;
    const Vec3 w_star = log_map(gt[i]).v;
    const Vec3 minus = w - w_star;
    const Vec3 plus = w + w_star;
    acc += std::min(minus.dot(hi[i] * minus), plus.dot(hi[i] * plus));
  }
  return std::sqrt(acc);
}

double rms_angular_error(const std::vector<Rotation>& gt, const std::vector<Rotation>& est) {
  const GaugeAlignment ga = align_gauge(est, gt);
  double acc = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const Rotation rel = ga.aligned[i] * gt[i].transposed();
    const double theta = log_map(rel).v.norm();
    acc += theta * theta;
  }
  return std::sqrt(acc / static_cast<double>(gt.size())) * 180.0 / M_PI;
}

MetricsReport evaluate(const std::vector<Rotation>& gt, const std::vector<Rotation>& est,
                       const std::vector<EdgeMeasurement>& edges, const std::string& method,
                       double runtime_s) {
  MetricsReport report;
  report.method = method;
  report.runtime_s = runtime_s;
  report.chordal_err = chordal_error(gt, est);
  const GaugeAlignment ga = align_gauge(est, gt);
  report.mahalanobis_err = mahalanobis_error(gt, ga.aligned, edges);
  report.rms_angular_deg = rms_angular_error(gt, est);
  return report;
}

}  // namespace rotavg
