#include "rotavg/pipeline.hpp"

#include <chrono>
#include <stdexcept>

#include "rotavg/spectral.hpp"

namespace rotavg {

const char* method_name(Method m) {
  switch (m) {
    case Method::O3Iso: return "o3-iso";
    case Method::O3Aniso: return "o3-aniso";
    case Method::CSo3Iso: return "cso3-iso";
    case Method::CSo3Aniso: return "cso3-aniso";
    case Method::Spectral: return "spectral";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "o3-iso") return Method::O3Iso;
  if (name == "o3-aniso") return Method::O3Aniso;
  if (name == "cso3-iso") return Method::CSo3Iso;
  if (name == "cso3-aniso") return Method::CSo3Aniso;
  if (name == "spectral") return Method::Spectral;
  return std::nullopt;
}

bool is_sdp_method(Method m) { return m != Method::Spectral; }

Formulation formulation_of(Method m) {
  switch (m) {
    case Method::O3Iso: return Formulation::O3Iso;
    case Method::O3Aniso: return Formulation::O3Aniso;
    case Method::CSo3Iso: return Formulation::CSo3Iso;
    case Method::CSo3Aniso: return Formulation::CSo3Aniso;
    case Method::Spectral: break;
  }
  throw std::invalid_argument("formulation_of: spectral is not an SDP formulation");
}

CostMode cost_mode_of(Method m) {
  return (m == Method::O3Iso || m == Method::CSo3Iso) ? CostMode::Isotropic
                                                      : CostMode::Anisotropic;
}

io::SolveReport run_pipeline(const io::Problem& problem, const PipelineOptions& options) {
  io::SolveReport report;
  report.method = method_name(options.method);
  report.alpha = options.alpha;
  report.settings = options.solver;
  report.gap_tol = options.gap_tol;
  report.rank_energy = options.rank_energy;
  report.percent_indefinite = percent_indefinite(problem.edges);

  std::vector<Rotation> estimate;
  double runtime = 0.0;

  if (options.method == Method::Spectral) {
    const auto t0 = std::chrono::steady_clock::now();
    estimate = spectral_solve(problem.edges, problem.n_cams);
    runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.status = "ok";
    report.wall_time_s = runtime;
  } else {
    const CostMatrix cost = assemble_cost(problem.edges, problem.n_cams,
                                          cost_mode_of(options.method), options.alpha);
    const ConicProgram program = build_program(cost, formulation_of(options.method));
    const SolverResult solved = solve(program, options.solver);
    report.status = status_name(solved.status);
    report.iterations = solved.iterations;
    report.residuals = solved.residuals;
    report.wall_time_s = solved.wall_time_s;
    runtime = solved.wall_time_s;
    if (solved.status == SolveStatus::Optimal) {
      report.certificate = certify(cost, program, solved, options.gap_tol,
                                   options.rank_energy, &estimate);
    } else {
      // Best-effort rounding so a non-optimal run still reports rotations.
      const Eigen::MatrixXd x = extract_gram(program, solved.primal_vector);
      estimate = round_to_rotations(x).rotations;
    }
  }

  report.rotations = estimate;
  if (problem.ground_truth && !estimate.empty()) {
    report.metrics = evaluate(*problem.ground_truth, estimate, problem.edges,
                              report.method, runtime);
  }
  return report;
}

}  // namespace rotavg
