#include "gcmmc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gcmmc/runtime.hpp"

namespace gcmmc {

namespace {

std::string join(const ValidationReport& report) {
  std::string out;
  for (const auto& line : report) {
    if (!out.empty()) out += "; ";
    out += line;
  }
  return out;
}

ClusterCode correlated_code(int n, int r, int m) {
  ClusterCode code;
  code.design = Design::Correlated;
  code.support = shrink_correlated(build_cyclic_assignment(n, r), m);
  code.schedule = build_message_schedule(code.support, CorrelatedParams{r, m});
  return code;
}

ClusterCode uncorrelated_code(int n, int r, const std::vector<int>& order_vector) {
  ClusterCode code;
  code.design = Design::Uncorrelated;
  code.support = expand_virtual(build_cyclic_assignment(n, r), order_vector);
  code.schedule = build_message_schedule(code.support, UncorrelatedParams{order_vector});
  return code;
}

// The first message needing all r computations becomes the cluster average.
void add_average_escape(ClusterCode& code, int r) {
  code.has_average_row = true;
  for (auto& list : code.schedule.per_worker) {
    for (auto& msg : list) {
      if (msg.computations_required == r) {
        msg.row = code.average_row();
        break;
      }
    }
  }
}

struct Event {
  double ready;
  int worker;
  int cluster;
  int row;
};

struct ClusterState {
  std::vector<char> seen;
  std::vector<int> rows;
  int distinct_coded = 0;
  bool average = false;
  bool done = false;
};

bool cluster_decodable(const ClusterCode& code, const ClusterState& st, DecodeCheck check) {
  if (st.average) return true;
  if (check == DecodeCheck::Threshold) return st.distinct_coded >= code.threshold;
  Eigen::MatrixXd received(static_cast<Eigen::Index>(st.rows.size()), code.batches());
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    received.row(static_cast<Eigen::Index>(i)) = code.coefficients(st.rows[i]);
  }
  const auto result = solve_combination(received, 1.0 / code.batches());
  if (result.status == DecodeStatus::NumericalFailure) {
    throw std::runtime_error("numerical failure while decoding");
  }
  return result.decoded();
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

Eigen::RowVectorXd ClusterCode::coefficients(int row) const {
  if (is_average_row(row)) return Eigen::RowVectorXd::Constant(batches(), 1.0 / batches());
  return encoding.B.row(row);
}

SchemeInstance build_scheme(const SchemeConfig& cfg, const BuildOptions& options) {
  if (const auto report = validate_config(cfg); !report.empty()) {
    throw ConfigError("invalid " + std::string(to_string(cfg.scheme)) + " config: " + join(report));
  }
  SchemeInstance inst;
  inst.kind = cfg.scheme;
  inst.K = cfg.K;
  inst.r = cfg.r;
  inst.partition = partition_clusters(cfg.K, cfg.P, cfg.K);
  const int n = cfg.K / cfg.P;

  ClusterCode code;
  switch (cfg.scheme) {
    case Scheme::GC:
    case Scheme::FractionalRepetition:
      code = correlated_code(n, cfg.r, cfg.r);
      break;
    case Scheme::UC_MMC:
      code = correlated_code(n, cfg.r, 1);
      break;
    case Scheme::GC_MMC_Correlated:
      code = correlated_code(n, cfg.r, cfg.m);
      break;
    case Scheme::GC_MMC_Uncorrelated:
      code = uncorrelated_code(n, cfg.r, cfg.order_vector);
      break;
    case Scheme::Hybrid:
      code = cfg.order_vector.empty() ? correlated_code(n, cfg.r, cfg.m)
                                      : uncorrelated_code(n, cfg.r, cfg.order_vector);
      inst.hybrid = true;
      break;
  }
  code.encoding = build_encoding_matrix(code.support);
  code.threshold = decode_threshold(code.support);

  if (options.certify) {
    inst.certificate = verify_code(code.encoding, code.threshold, options.certificate_seed);
    if (!inst.certificate.passed) {
      throw std::runtime_error("code certificate failed for " + std::string(to_string(cfg.scheme)));
    }
  }
  if (inst.hybrid) add_average_escape(code, cfg.r);
  inst.clusters.assign(static_cast<std::size_t>(cfg.P), code);
  return inst;
}

IterationOutcome run_iteration(const SchemeInstance& instance, const IterationTimelines& timelines,
                               const RunOptions& options) {
  if (static_cast<int>(timelines.size()) != instance.K) {
    throw std::invalid_argument("timelines must cover every worker");
  }
  std::vector<Event> events;
  for (std::size_t c = 0; c < instance.clusters.size(); ++c) {
    const auto& code = instance.clusters[c];
    const auto& workers = instance.partition.clusters[c].workers;
    for (std::size_t lw = 0; lw < workers.size(); ++lw) {
      const auto& timeline = timelines[static_cast<std::size_t>(workers[lw])];
      for (const auto& msg : code.schedule.per_worker[lw]) {
        events.push_back({timeline.at(msg.computations_required), workers[lw], static_cast<int>(c), msg.row});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.ready != b.ready) return a.ready < b.ready;
    if (a.worker != b.worker) return a.worker < b.worker;
    return a.row < b.row;
  });

  std::vector<ClusterState> state(instance.clusters.size());
  for (std::size_t c = 0; c < state.size(); ++c) {
    state[c].seen.assign(static_cast<std::size_t>(instance.clusters[c].message_count()), 0);
  }

  IterationOutcome out;
  std::size_t remaining = state.size();
  for (const auto& e : events) {
    auto& st = state[static_cast<std::size_t>(e.cluster)];
    const auto& code = instance.clusters[static_cast<std::size_t>(e.cluster)];
    if (st.done || st.seen[static_cast<std::size_t>(e.row)]) continue;
    st.seen[static_cast<std::size_t>(e.row)] = 1;
    st.rows.push_back(e.row);
    if (code.is_average_row(e.row)) st.average = true;
    else ++st.distinct_coded;
    if (!cluster_decodable(code, st, options.check)) continue;

    st.done = true;
    for (int row : st.rows) out.rows_used.push_back({e.cluster, row});
    if (--remaining == 0) {
      out.completion_time = e.ready;
      out.decodable = true;
      break;
    }
  }

  if (!out.decodable) {
    out.rows_used.clear();
    out.comm_load = static_cast<std::int64_t>(events.size());
    return out;
  }

  if (options.distinct_comm_load) {
    std::vector<std::vector<char>> counted(instance.clusters.size());
    for (std::size_t c = 0; c < counted.size(); ++c) {
      counted[c].assign(static_cast<std::size_t>(instance.clusters[c].message_count()), 0);
    }
    for (const auto& e : events) {
      if (e.ready > out.completion_time) break;
      auto& flag = counted[static_cast<std::size_t>(e.cluster)][static_cast<std::size_t>(e.row)];
      if (!flag) {
        flag = 1;
        ++out.comm_load;
      }
    }
  } else {
    for (const auto& e : events) {
      if (e.ready > out.completion_time) break;
      ++out.comm_load;
    }
  }
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("GCMMC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const SchemeConfig& cfg, const ExperimentOptions& options) {
  return run_experiment(build_scheme(cfg), cfg, options);
}

ExperimentResult run_experiment(const SchemeInstance& instance, const SchemeConfig& cfg,
                                const ExperimentOptions& options) {
  if (const auto report = validate_config(cfg); !report.empty()) throw ConfigError(join(report));
  const auto trials = cfg.iterations;
  ExperimentResult result;
  result.trials.resize(static_cast<std::size_t>(trials));

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      Rng rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      const auto timelines = sample_iteration(cfg.mu, cfg.alpha, cfg.r, cfg.K, rng);
      const auto outcome = run_iteration(instance, timelines, options.run);
      result.trials[static_cast<std::size_t>(t)] = {t, outcome.completion_time, outcome.comm_load, outcome.decodable};
    }
  };

  const int threads = static_cast<int>(
      std::clamp<std::int64_t>(options.threads > 0 ? options.threads : default_thread_count(), 1, trials));
  if (threads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (trials + threads - 1) / threads;
    for (int i = 0; i < threads; ++i) {
      const std::int64_t begin = i * chunk;
      const std::int64_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> completion;
  std::vector<double> load;
  completion.reserve(result.trials.size());
  load.reserve(result.trials.size());
  auto& s = result.summary;
  s.config = cfg;
  s.trials = trials;
  for (const auto& rec : result.trials) {
    if (!rec.decodable) {
      ++s.undecodable;
      continue;
    }
    completion.push_back(rec.completion_time);
    load.push_back(static_cast<double>(rec.comm_load));
  }
  s.mean_completion_time = mean_of(completion);
  s.stderr_completion_time = stderr_of(completion, s.mean_completion_time);
  s.mean_comm_load = mean_of(load);
  s.stderr_comm_load = stderr_of(load, s.mean_comm_load);
  return result;
}

std::vector<ExperimentResult> compare_schemes(const std::vector<NamedConfig>& configs,
                                              const ExperimentOptions& options) {
  if (configs.empty()) throw ConfigError("no schemes");
  const auto& ref = configs.front().config;
  for (const auto& nc : configs) {
    const auto& c = nc.config;
    if (c.K != ref.K || c.r != ref.r || c.mu != ref.mu || c.alpha != ref.alpha || c.iterations != ref.iterations ||
        c.seed != ref.seed) {
      throw ConfigError("scheme '" + nc.name + "' does not share K, r, mu, alpha, iterations and seed");
    }
  }
  std::vector<ExperimentResult> out;
  for (const auto& nc : configs) {
    auto res = run_experiment(nc.config, options);
    res.summary.name = nc.name;
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace gcmmc
