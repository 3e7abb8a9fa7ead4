#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "rotavg/bench.hpp"
#include "rotavg/io.hpp"
#include "rotavg/pipeline.hpp"

namespace {

// Exit codes: 0 success, 1 usage error, 2 invalid input, 3 solver non-optimal.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitSolverFailed = 3;

std::string default_out_dir() {
  const char* env = std::getenv("ROTAVG_OUT_DIR");
  return env != nullptr ? std::string(env) : std::string(".");
}

void add_solver_flags(CLI::App* cmd, rotavg::PipelineOptions& opts) {
  cmd->add_option("--abs-feas", opts.solver.abs_feas, "absolute feasibility tolerance");
  cmd->add_option("--rel-feas", opts.solver.rel_feas, "relative feasibility tolerance");
  cmd->add_option("--infeas-tol", opts.solver.infeas_tol, "infeasibility tolerance");
  cmd->add_option("--max-iters", opts.solver.max_iters, "solver iteration cap");
  cmd->add_option("--step", opts.solver.step, "splitting penalty parameter");
  cmd->add_option("--relaxation", opts.solver.relaxation, "over-relaxation factor");
  cmd->add_flag("--no-adaptive-step{false}", opts.solver.adaptive_step,
                "disable residual-balancing penalty updates");
  cmd->add_flag("--no-equilibrate{false}", opts.solver.equilibrate,
                "disable Ruiz equilibration");
  cmd->add_option("--gap-tol", opts.gap_tol, "relative gap threshold for tightness");
  cmd->add_option("--rank-energy", opts.rank_energy,
                  "singular-value energy fraction of the rank rule");
  cmd->add_option("--alpha", opts.alpha, "weighting split exponent in [0, 1]");
}

int cmd_solve(const std::string& problem_path, const std::string& method_name,
              const rotavg::PipelineOptions& base, const std::string& out_path) {
  const auto method = rotavg::method_from_name(method_name);
  if (!method) {
    std::cerr << "unknown method: " << method_name << "\n";
    return kExitUsage;
  }
  rotavg::io::Problem problem;
  try {
    problem = rotavg::io::read_problem(problem_path);
  } catch (const std::exception& err) {
    std::cerr << "invalid problem: " << err.what() << "\n";
    return kExitInvalidInput;
  }

  rotavg::PipelineOptions opts = base;
  opts.method = *method;
  rotavg::io::SolveReport report;
  try {
    report = rotavg::run_pipeline(problem, opts);
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& err) {
    std::cerr << "solve failed: " << err.what() << "\n";
    return kExitSolverFailed;
  }

  if (!out_path.empty()) {
    rotavg::io::write_report(out_path, report);
  } else {
    std::cout << rotavg::io::serialize_report(report);
  }

  std::cerr << "method=" << report.method << " status=" << report.status;
  if (report.certificate) {
    std::cerr << " rank=" << report.certificate->rank_estimate
              << " tight=" << (report.certificate->tight ? "yes" : "no")
              << " gap=" << report.certificate->relative_gap;
  }
  if (report.metrics) std::cerr << " chordal_err=" << report.metrics->chordal_err;
  std::cerr << " time=" << report.wall_time_s << "s\n";

  const bool solver_ok = report.status == "optimal" || report.status == "ok";
  return solver_ok ? kExitOk : kExitSolverFailed;
}

int cmd_synth(const rotavg::SynthConfig& config, bool toy, double sigma, int axis,
              double eps, const std::string& out_path) {
  rotavg::SyntheticInstance instance;
  std::map<std::string, std::string> meta;
  meta["generator"] = rotavg::Rng::kAlgorithm;
  meta["seed"] = std::to_string(config.seed);
  try {
    if (toy) {
      instance = rotavg::toy_three_cam(sigma, axis, eps, config.seed);
      meta["protocol"] = "toy";
      meta["sigma"] = std::to_string(sigma);
      meta["axis"] = std::to_string(axis);
      meta["eps"] = std::to_string(eps);
    } else {
      instance = rotavg::generate(config);
      meta["protocol"] = "uniform";
      meta["p"] = std::to_string(config.edge_fraction);
      meta["cov_lo"] = std::to_string(config.cov_eig_range.first);
      meta["cov_hi"] = std::to_string(config.cov_eig_range.second);
    }
  } catch (const std::exception& err) {
    std::cerr << "generation failed: " << err.what() << "\n";
    return kExitInvalidInput;
  }
  rotavg::io::write_problem(out_path, rotavg::io::problem_from_instance(instance, meta));
  std::cerr << "wrote " << out_path << " (" << instance.ground_truth.size() << " cameras, "
            << instance.edges.size() << " edges)\n";
  return kExitOk;
}

int cmd_bench(rotavg::bench::ProtocolConfig config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto rows = rotavg::bench::run_protocol(config);

  const std::string rows_path = out_dir + "/" + config.protocol + "_results.csv";
  const std::string summary_path = out_dir + "/" + config.protocol + "_summary.csv";
  {
    std::ofstream out(rows_path);
    if (!out) {
      std::cerr << "cannot write " << rows_path << "\n";
      return kExitInvalidInput;
    }
    rotavg::bench::write_rows_csv(out, rows);
  }
  {
    std::ofstream out(summary_path);
    rotavg::bench::write_summary_csv(out, rows);
  }
  std::cerr << "wrote " << rows_path << " (" << rows.size() << " rows) and "
            << summary_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rotavg: certifiably optimal rotation averaging with anisotropic "
      "uncertainty weighting"};
  app.require_subcommand(1);

  // --- solve ---
  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  std::string problem_path, method = "cso3-aniso", report_path;
  rotavg::PipelineOptions solve_opts;
  solve_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--method", method,
                        "o3-iso | o3-aniso | cso3-iso | cso3-aniso | spectral");
  solve_cmd->add_option("--out", report_path, "report output path (default: stdout)");
  add_solver_flags(solve_cmd, solve_opts);

  // --- synth ---
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic problem file");
  rotavg::SynthConfig synth_config;
  bool toy = false;
  double sigma = 0.1, eps = 0.001;
  int axis = 0;
  std::string synth_out = default_out_dir() + "/problem.json";
  synth_cmd->add_option("--n", synth_config.n_cams, "number of cameras");
  synth_cmd->add_option("--p", synth_config.edge_fraction, "edge observation fraction");
  synth_cmd->add_option("--cov-lo", synth_config.cov_eig_range.first,
                        "smallest covariance eigenvalue");
  synth_cmd->add_option("--cov-hi", synth_config.cov_eig_range.second,
                        "largest covariance eigenvalue");
  synth_cmd->add_option("--seed", synth_config.seed, "generator seed");
  synth_cmd->add_flag("--noise-free", synth_config.noise_free,
                      "zero deviations (covariances still attached)");
  synth_cmd->add_flag("--toy", toy, "three-camera toy protocol");
  synth_cmd->add_option("--sigma", sigma, "toy: variance along the noisy axis");
  synth_cmd->add_option("--axis", axis, "toy: noisy axis (0, 1 or 2)");
  synth_cmd->add_option("--eps", eps, "toy: variance of the certain directions");
  synth_cmd->add_option("--out", synth_out, "output path");

  // --- bench ---
  auto* bench_cmd = app.add_subcommand("bench", "run a synthetic study, write CSV");
  std::string protocol = "fig3", bench_out = default_out_dir();
  std::vector<int> n_range;
  std::vector<double> p_list, sigma_list;
  std::vector<std::string> bench_methods;
  int instances = -1;
  std::uint64_t bench_seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool bench_noise_free = false;
  rotavg::PipelineOptions bench_opts;
  bench_cmd->add_option("--protocol", protocol, "fig2 | fig3 | toy");
  bench_cmd->add_option("--n-range", n_range, "camera counts");
  bench_cmd->add_option("--p-list", p_list, "edge fractions");
  bench_cmd->add_option("--sigma-list", sigma_list, "toy sigma sweep");
  bench_cmd->add_option("--instances", instances, "instances per configuration");
  bench_cmd->add_option("--seed", bench_seed, "base seed");
  bench_cmd->add_option("--methods", bench_methods, "subset of methods to run");
  bench_cmd->add_option("--jobs", jobs, "parallel workers");
  bench_cmd->add_flag("--noise-free", bench_noise_free, "zero deviations");
  bench_cmd->add_option("--out", bench_out, "output directory");
  add_solver_flags(bench_cmd, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      return cmd_solve(problem_path, method, solve_opts, report_path);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_config, toy, sigma, axis, eps, synth_out);
    }
    if (bench_cmd->parsed()) {
      rotavg::bench::ProtocolConfig config;
      if (protocol == "fig2") {
        config = rotavg::bench::default_fig2();
      } else if (protocol == "fig3") {
        config = rotavg::bench::default_fig3();
      } else if (protocol == "toy") {
        config = rotavg::bench::default_toy();
      } else {
        std::cerr << "unknown protocol: " << protocol << "\n";
        return kExitUsage;
      }
      if (!n_range.empty()) config.n_list = n_range;
      if (!p_list.empty()) config.p_list = p_list;
      if (!sigma_list.empty()) config.sigma_list = sigma_list;
      if (instances >= 0) config.instances = instances;
      config.seed = bench_seed;
      config.jobs = jobs;
      config.noise_free = bench_noise_free;
      config.base = bench_opts;
      if (!bench_methods.empty()) {
        config.methods.clear();
        for (const std::string& name : bench_methods) {
          const auto m = rotavg::method_from_name(name);
          if (!m) {
            std::cerr << "unknown method: " << name << "\n";
            return kExitUsage;
          }
          config.methods.push_back(*m);
        }
      }
      return cmd_bench(config, bench_out);
    }
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSolverFailed;
  }
  return kExitUsage;
}
