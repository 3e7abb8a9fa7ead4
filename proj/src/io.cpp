#include "rotavg/io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace rotavg::io {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1";
constexpr double kRotationTol = 1e-6;

json matrix_to_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  }
  return a;
}

Mat3 matrix_from_json(const json& a, const std::string& what) {
  if (!a.is_array() || a.size() != 9) {
    throw std::invalid_argument(what + ": expected 9 row-major reals");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const json& v = a[3 * r + c];
      if (!v.is_number()) throw std::invalid_argument(what + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

Rotation rotation_from_json(const json& a, const std::string& what) {
  const Mat3 m = matrix_from_json(a, what);
  const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > kRotationTol) {
    throw std::invalid_argument(what + ": matrix is not orthogonal (deviation " +
                                std::to_string(ortho) + " beyond 1e-6)");
  }
  if (std::abs(det - 1.0) > kRotationTol) {
    throw std::invalid_argument(what + ": determinant " + std::to_string(det) +
                                " is not +1 within 1e-6");
  }
  if (ortho <= Rotation::kOrthoTol && std::abs(det - 1.0) <= Rotation::kOrthoTol) {
    return Rotation::from_matrix_unchecked(m);
  }
  return closest_rotation(m);  // mild drift: snap back onto the manifold
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("problem file: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("problem file: expected a JSON object");
  if (doc.value("version", "") != kVersion) {
    throw std::invalid_argument("problem file: unrecognized version tag");
  }
  if (!doc.contains("n_cams") || !doc["n_cams"].is_number_integer()) {
    throw std::invalid_argument("problem file: missing integer n_cams");
  }

  Problem p;
  p.n_cams = doc["n_cams"].get<int>();
  if (p.n_cams < 1) throw std::invalid_argument("problem file: n_cams must be positive");

  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw std::invalid_argument("problem file: missing edges array");
  }
  std::set<std::pair<int, int>> seen;
  int index = 0;
  for (const json& e : doc["edges"]) {
    const std::string label = "edge #" + std::to_string(index);
    if (!e.is_object() || !e.contains("i") || !e.contains("j")) {
      throw std::invalid_argument(label + ": expected an object with i and j");
    }
    const int i = e["i"].get<int>();
    const int j = e["j"].get<int>();
    if (i < 0 || j < 0 || i >= p.n_cams || j >= p.n_cams) {
      throw std::invalid_argument(label + " (" + std::to_string(i) + ", " + std::to_string(j) +
                                  "): camera index out of range");
    }
    if (i == j) {
      throw std::invalid_argument(label + ": self-loop (i == j)");
    }
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second) {
      throw std::invalid_argument(label + " (" + std::to_string(i) + ", " + std::to_string(j) +
                                  "): duplicate camera pair");
    }
    const Rotation r = rotation_from_json(e.value("r_tilde", json()), label + " r_tilde");
    const Mat3 h = matrix_from_json(e.value("hessian", json()), label + " hessian");
    try {
      p.edges.push_back(EdgeMeasurement::make(i, j, r, h));
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument(label + ": " + err.what());
    }
    ++index;
  }

  if (doc.contains("ground_truth") && !doc["ground_truth"].is_null()) {
    const json& gt = doc["ground_truth"];
    if (!gt.is_array() || static_cast<int>(gt.size()) != p.n_cams) {
      throw std::invalid_argument("problem file: ground_truth must list one rotation per camera");
    }
    std::vector<Rotation> rotations;
    int cam = 0;
    for (const json& r : gt) {
      rotations.push_back(rotation_from_json(r, "ground_truth #" + std::to_string(cam)));
      ++cam;
    }
    p.ground_truth = std::move(rotations);
  }

  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    for (const auto& [key, value] : doc["metadata"].items()) {
      p.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return p;
}

Problem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const Problem& problem) {
  json doc;
  doc["version"] = kVersion;
  doc["n_cams"] = problem.n_cams;
  json edges = json::array();
  for (const EdgeMeasurement& e : problem.edges) {
    json edge;
    edge["i"] = e.i;
    edge["j"] = e.j;
    edge["r_tilde"] = matrix_to_json(e.r_tilde.matrix());
    edge["hessian"] = matrix_to_json(e.h);
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  if (problem.ground_truth) {
    json gt = json::array();
    for (const Rotation& r : *problem.ground_truth) gt.push_back(matrix_to_json(r.matrix()));
    doc["ground_truth"] = std::move(gt);
  }
  if (!problem.metadata.empty()) {
    json meta;
    for (const auto& [key, value] : problem.metadata) meta[key] = value;
    doc["metadata"] = std::move(meta);
  }
  return doc.dump(2) + "\n";
}

void write_problem(const std::string& path, const Problem& problem) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write problem file: " + path);
  out << serialize_problem(problem);
}

Problem problem_from_instance(const SyntheticInstance& instance,
                              std::map<std::string, std::string> metadata) {
  Problem p;
  p.n_cams = static_cast<int>(instance.ground_truth.size());
  p.edges = instance.edges;
  p.ground_truth = instance.ground_truth;
  p.metadata = std::move(metadata);
  return p;
}

std::string serialize_report(const SolveReport& report) {
  json doc;
  doc["version"] = kVersion;
  doc["method"] = report.method;
  doc["alpha"] = report.alpha;
  doc["solver_settings"] = {
      {"abs_feas", report.settings.abs_feas},
      {"rel_feas", report.settings.rel_feas},
      {"infeas_tol", report.settings.infeas_tol},
      {"max_iters", report.settings.max_iters},
      {"step", report.settings.step},
      {"relaxation", report.settings.relaxation},
      {"adaptive_step", report.settings.adaptive_step},
      {"equilibrate", report.settings.equilibrate},
  };
  doc["gap_tol"] = report.gap_tol;
  doc["rank_energy"] = report.rank_energy;
  doc["status"] = report.status;
  doc["iterations"] = report.iterations;
  doc["residuals"] = {{"primal", report.residuals.primal},
                      {"dual", report.residuals.dual},
                      {"gap", report.residuals.gap}};
  doc["wall_time_s"] = report.wall_time_s;
  if (report.certificate) {
    const Certificate& c = *report.certificate;
    doc["certificate"] = {{"rank", c.rank_estimate},
                          {"sdp_lower_bound", c.sdp_lower_bound},
                          {"rounded_cost", c.rounded_cost},
                          {"relative_gap", c.relative_gap},
                          {"tight", c.tight},
                          {"per_block_det", c.per_block_det}};
  }
  if (report.metrics) {
    doc["metrics"] = {{"chordal_err", report.metrics->chordal_err},
                      {"mahalanobis_err", report.metrics->mahalanobis_err},
                      {"rms_angular_deg", report.metrics->rms_angular_deg}};
  }
  doc["percent_indefinite"] = report.percent_indefinite;
  json rots = json::array();
  for (const Rotation& r : report.rotations) rots.push_back(matrix_to_json(r.matrix()));
  doc["rotations"] = std::move(rots);
  return doc.dump(2) + "\n";
}

void write_report(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << serialize_report(report);
}

}  // namespace rotavg::io
