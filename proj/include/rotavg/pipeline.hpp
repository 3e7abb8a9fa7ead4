#pragma once

#include <optional>
#include <string>

#include "rotavg/io.hpp"
#include "rotavg/sdp_model.hpp"

namespace rotavg {

enum class Method { O3Iso, O3Aniso, CSo3Iso, CSo3Aniso, Spectral };

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);
bool is_sdp_method(Method m);
Formulation formulation_of(Method m);  // SDP methods only
CostMode cost_mode_of(Method m);

struct PipelineOptions {
  Method method = Method::CSo3Aniso;
  double alpha = 0.0;
  SolverSettings solver;
  double gap_tol = 1e-4;
  double rank_energy = 0.999;
};

// Full solve: cost assembly, program build (or the spectral path), solve,
// rounding, certification and, when ground truth is present, metrics.
io::SolveReport run_pipeline(const io::Problem& problem, const PipelineOptions& options);

}  // namespace rotavg
