#include "rotavg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rotavg::bench {

ProtocolConfig default_fig2() {
  ProtocolConfig cfg;
  cfg.protocol = "fig2";
  cfg.n_list = {15};
  cfg.p_list = {1.0};
  cfg.cov_eig_range = {0.1, 1.0};
  cfg.instances = 50;
  cfg.methods = {Method::O3Aniso, Method::CSo3Aniso};
  return cfg;
}

ProtocolConfig default_fig3() {
  ProtocolConfig cfg;
  cfg.protocol = "fig3";
  cfg.n_list = {5, 10, 20};
  cfg.p_list = {0.4, 0.8};
  cfg.cov_eig_range = {0.01, 0.1};
  cfg.instances = 100;
  cfg.methods = {Method::O3Iso, Method::O3Aniso, Method::CSo3Iso, Method::CSo3Aniso,
                 Method::Spectral};
  return cfg;
}

ProtocolConfig default_toy() {
  ProtocolConfig cfg;
  cfg.protocol = "toy";
  cfg.sigma_list = {0.01, 0.05, 0.1, 0.2, 0.3};
  cfg.axes = {0, 1, 2};
  cfg.instances = 25;
  cfg.methods = {Method::O3Iso, Method::CSo3Aniso};
  return cfg;
}

std::uint64_t instance_seed(std::uint64_t base, std::uint64_t config_index,
                            std::uint64_t instance_index) {
  // splitmix64 of the packed identifiers
  std::uint64_t x = base ^ (config_index * 0x9e3779b97f4a7c15ull) ^
                    (instance_index * 0xbf58476d1ce4e5b9ull);
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

struct Task {
  std::string protocol;
  int n = 0;
  std::optional<double> p;
  std::optional<double> sigma;
  std::optional<int> axis;
  int instance = 0;
  std::uint64_t seed = 0;
};

std::vector<Row> run_task(const Task& task, const ProtocolConfig& cfg) {
  SyntheticInstance instance;
  if (task.protocol == "toy") {
    instance = toy_three_cam(*task.sigma, *task.axis, cfg.toy_eps, task.seed);
  } else {
    SynthConfig sc;
    sc.n_cams = task.n;
    sc.edge_fraction = task.p.value_or(1.0);
    sc.cov_eig_range = cfg.cov_eig_range;
    sc.seed = task.seed;
    sc.noise_free = cfg.noise_free;
    instance = generate(sc);
  }
  const io::Problem problem = io::problem_from_instance(instance);

  std::vector<Row> rows;
  rows.reserve(cfg.methods.size());
  for (Method method : cfg.methods) {
    PipelineOptions opts = cfg.base;
    opts.method = method;
    const io::SolveReport report = run_pipeline(problem, opts);

    Row row;
    row.protocol = task.protocol;
    row.n_cams = task.n;
    row.p = task.p;
    row.sigma = task.sigma;
    row.axis = task.axis;
    row.instance = task.instance;
    row.seed = task.seed;
    row.method = report.method;
    row.status = report.status;
    row.iterations = report.iterations;
    if (report.certificate) {
      row.rank = report.certificate->rank_estimate;
      row.tight = report.certificate->tight;
      row.sdp_lower_bound = report.certificate->sdp_lower_bound;
      row.rounded_cost = report.certificate->rounded_cost;
      row.relative_gap = report.certificate->relative_gap;
    }
    if (report.metrics) {
      row.chordal_err = report.metrics->chordal_err;
      row.mahalanobis_err = report.metrics->mahalanobis_err;
      row.rms_angular_deg = report.metrics->rms_angular_deg;
    }
    row.runtime_s = report.wall_time_s;
    row.percent_indefinite = report.percent_indefinite;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<Row> run_protocol(const ProtocolConfig& cfg) {
  std::vector<Task> tasks;
  std::uint64_t config_index = 0;
  if (cfg.protocol == "toy") {
    for (int axis : cfg.axes) {
      for (double sigma : cfg.sigma_list) {
        for (int k = 0; k < cfg.instances; ++k) {
          Task t;
          t.protocol = cfg.protocol;
          t.n = 3;
          t.sigma = sigma;
          t.axis = axis;
          t.instance = k;
          t.seed = instance_seed(cfg.seed, config_index, static_cast<std::uint64_t>(k));
          tasks.push_back(t);
        }
        ++config_index;
      }
    }
  } else if (cfg.protocol == "fig2" || cfg.protocol == "fig3") {
    for (int n : cfg.n_list) {
      for (double p : cfg.p_list) {
        for (int k = 0; k < cfg.instances; ++k) {
          Task t;
          t.protocol = cfg.protocol;
          t.n = n;
          t.p = p;
          t.instance = k;
          t.seed = instance_seed(cfg.seed, config_index, static_cast<std::uint64_t>(k));
          tasks.push_back(t);
        }
        ++config_index;
      }
    }
  } else {
    throw std::invalid_argument("run_protocol: unknown protocol " + cfg.protocol);
  }

  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::vector<Row>> per_task(tasks.size());
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) per_task[t] = run_task(tasks[t], cfg);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t t = next.fetch_add(1);
        if (t >= tasks.size()) break;
        per_task[t] = run_task(tasks[t], cfg);
      }
    };
    std::vector<std::future<void>> futures;
    for (int w = 0; w < jobs; ++w) futures.push_back(std::async(std::launch::async, worker));
    for (auto& f : futures) f.get();
  }

  std::vector<Row> rows;
  for (auto& chunk : per_task) {
    rows.insert(rows.end(), chunk.begin(), chunk.end());
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("CSV output would contain a non-finite value");
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

template <typename T>
std::string opt_fmt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else if constexpr (std::is_same_v<T, int>) {
    return std::to_string(*v);
  } else {
    return fmt(*v);
  }
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<Row>& rows) {
  out << "protocol,n_cams,p,sigma,axis,instance,seed,method,status,iterations,rank,tight,"
         "sdp_lower_bound,rounded_cost,relative_gap,chordal_err,mahalanobis_err,"
         "rms_angular_deg,runtime_s,percent_indefinite\n";
  for (const Row& r : rows) {
    out << r.protocol << ',' << r.n_cams << ',' << opt_fmt(r.p) << ',' << opt_fmt(r.sigma)
        << ',' << opt_fmt(r.axis) << ',' << r.instance << ',' << r.seed << ',' << r.method
        << ',' << r.status << ',' << r.iterations << ',' << opt_fmt(r.rank) << ','
        << opt_fmt(r.tight) << ',' << opt_fmt(r.sdp_lower_bound) << ','
        << opt_fmt(r.rounded_cost) << ',' << opt_fmt(r.relative_gap) << ','
        << opt_fmt(r.chordal_err) << ',' << opt_fmt(r.mahalanobis_err) << ','
        << opt_fmt(r.rms_angular_deg) << ',' << fmt(r.runtime_s) << ','
        << fmt(r.percent_indefinite) << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_summary_csv(std::ostream& out, const std::vector<Row>& rows) {
  struct Key {
    std::string protocol;
    int n;
    double p;
    double sigma;
    int axis;
    std::string method;
    bool operator<(const Key& o) const {
      return std::tie(protocol, n, p, sigma, axis, method) <
             std::tie(o.protocol, o.n, o.p, o.sigma, o.axis, o.method);
    }
  };
  struct Agg {
    std::vector<double> chordal, rms, runtime;
    int count = 0, tight = 0, rank3 = 0, optimal = 0, with_cert = 0;
  };
  std::map<Key, Agg> groups;
  for (const Row& r : rows) {
    Key key{r.protocol, r.n_cams, r.p.value_or(-1.0), r.sigma.value_or(-1.0),
            r.axis.value_or(-1), r.method};
    Agg& agg = groups[key];
    ++agg.count;
    if (r.chordal_err) agg.chordal.push_back(*r.chordal_err);
    if (r.rms_angular_deg) agg.rms.push_back(*r.rms_angular_deg);
    agg.runtime.push_back(r.runtime_s);
    if (r.status == "optimal" || r.status == "ok") ++agg.optimal;
    if (r.tight.has_value()) {
      ++agg.with_cert;
      if (*r.tight) ++agg.tight;
      if (r.rank && *r.rank == 3) ++agg.rank3;
    }
  }
  out << "protocol,n_cams,p,sigma,axis,method,instances,optimal_fraction,"
         "median_chordal_err,median_rms_angular_deg,median_runtime_s,"
         "tight_fraction,rank3_fraction\n";
  for (const auto& [key, agg] : groups) {
    auto frac = [&](int num, int den) {
      return den > 0 ? fmt(static_cast<double>(num) / den) : std::string();
    };
    out << key.protocol << ',' << key.n << ',' << (key.p < 0 ? "" : fmt(key.p)) << ','
        << (key.sigma < 0 ? "" : fmt(key.sigma)) << ','
        << (key.axis < 0 ? "" : std::to_string(key.axis)) << ',' << key.method << ','
        << agg.count << ',' << frac(agg.optimal, agg.count) << ','
        << (agg.chordal.empty() ? "" : fmt(median(agg.chordal))) << ','
        << (agg.rms.empty() ? "" : fmt(median(agg.rms))) << ','
        << fmt(median(agg.runtime)) << ',' << frac(agg.tight, agg.with_cert) << ','
        << frac(agg.rank3, agg.with_cert) << '\n';
  }
}

}  // namespace rotavg::bench
