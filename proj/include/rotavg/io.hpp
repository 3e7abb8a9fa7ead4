#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotavg/conic_solver.hpp"
#include "rotavg/eval.hpp"
#include "rotavg/rounding.hpp"
#include "rotavg/synth.hpp"

namespace rotavg::io {

// On-disk problem: versioned JSON with row-major 3x3 matrices.
//
//   {
//     "version": "1",
//     "n_cams": 3,
//     "edges": [{"i": 0, "j": 1, "r_tilde": [9 reals], "hessian": [9 reals]}, ...],
//     "ground_truth": [[9 reals], ...],          // optional
//     "metadata": {"seed": "7", ...}             // optional, string-valued
//   }
//
// Rotations are serialized only as matrices (never as angles). On load each
// r_tilde must be orthogonal with determinant +1 within 1e-6; estimates off
// by more than 1e-9 are re-orthonormalized so the in-memory invariants hold.
struct Problem {
  int n_cams = 0;
  std::vector<EdgeMeasurement> edges;
  std::optional<std::vector<Rotation>> ground_truth;
  std::map<std::string, std::string> metadata;
};

// Parses and validates; error messages name the offending edge and the
// violated invariant. Throws std::invalid_argument.
Problem parse_problem(const std::string& text);
Problem read_problem(const std::string& path);

std::string serialize_problem(const Problem& problem);
void write_problem(const std::string& path, const Problem& problem);

Problem problem_from_instance(const SyntheticInstance& instance,
                              std::map<std::string, std::string> metadata = {});

// Self-contained solve record; re-running with the echoed settings
// reproduces every field except wall-clock times.
struct SolveReport {
  std::string method;
  double alpha = 0.0;
  SolverSettings settings;
  double gap_tol = 1e-4;
  double rank_energy = 0.999;

  std::string status;  // solver status, or "ok" for the spectral path
  long iterations = 0;
  Residuals residuals;
  double wall_time_s = 0.0;

  std::optional<Certificate> certificate;  // absent for spectral
  std::optional<MetricsReport> metrics;    // present when ground truth is known
  double percent_indefinite = 0.0;
  std::vector<Rotation> rotations;
};

std::string serialize_report(const SolveReport& report);
void write_report(const std::string& path, const SolveReport& report);

}  // namespace rotavg::io
