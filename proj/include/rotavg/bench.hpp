#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotavg/pipeline.hpp"

namespace rotavg::bench {

// One CSV row: an (instance, method) pair of a synthetic study.
struct Row {
  std::string protocol;
  int n_cams = 0;
  std::optional<double> p;
  std::optional<double> sigma;
  std::optional<int> axis;
  int instance = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::string status;
  long iterations = 0;
  std::optional<int> rank;
  std::optional<bool> tight;
  std::optional<double> sdp_lower_bound;
  std::optional<double> rounded_cost;
  std::optional<double> relative_gap;
  std::optional<double> chordal_err;
  std::optional<double> mahalanobis_err;
  std::optional<double> rms_angular_deg;
  double runtime_s = 0.0;
  double percent_indefinite = 0.0;
};

struct ProtocolConfig {
  std::string protocol;  // "fig2" | "fig3" | "toy"
  std::vector<int> n_list;
  std::vector<double> p_list;
  std::pair<double, double> cov_eig_range = {0.01, 0.1};
  std::vector<double> sigma_list;  // toy only
  std::vector<int> axes;           // toy only
  double toy_eps = 0.001;
  int instances = 0;
  std::uint64_t seed = 0;
  std::vector<Method> methods;
  PipelineOptions base;  // solver settings, alpha, tolerances
  int jobs = 1;
  bool noise_free = false;
};

ProtocolConfig default_fig2();
ProtocolConfig default_fig3();
ProtocolConfig default_toy();

// Instance seeds are derived deterministically from (seed, config, instance).
std::uint64_t instance_seed(std::uint64_t base, std::uint64_t config_index,
                            std::uint64_t instance_index);

// Runs every (configuration x instance x method) combination; instances may
// run on parallel workers, results are collected in deterministic order.
std::vector<Row> run_protocol(const ProtocolConfig& config);

void write_rows_csv(std::ostream& out, const std::vector<Row>& rows);

// Per-configuration medians and certificate fractions.
void write_summary_csv(std::ostream& out, const std::vector<Row>& rows);

double median(std::vector<double> values);

}  // namespace rotavg::bench
