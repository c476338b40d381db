#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcmmc/assignment.hpp"
#include "gcmmc/coding.hpp"
#include "gcmmc/model.hpp"

namespace gcmmc {

/// Gradient code of one cluster. Indices (rows, batches, workers) are
/// cluster-local.
struct ClusterCode {
  Design design = Design::Correlated;
  SupportMatrix support;
  EncodingMatrix encoding;
  MessageSchedule schedule;
  int threshold = 1;
  /// Hybrid only: message index support.rows() is the plain cluster average,
  /// sent by a worker once all r computations are done.
  bool has_average_row = false;

  int batches() const { return support.cols(); }
  int average_row() const { return support.rows(); }
  int message_count() const { return support.rows() + (has_average_row ? 1 : 0); }
  bool is_average_row(int row) const { return has_average_row && row == average_row(); }
  /// Combination coefficients over the cluster's batches carried by message `row`.
  Eigen::RowVectorXd coefficients(int row) const;
};

struct SchemeInstance {
  Scheme kind = Scheme::GC;
  int K = 0;
  int r = 0;
  ClusterPartition partition;
  std::vector<ClusterCode> clusters;
  bool hybrid = false;
  /// Certificate of the (shared) cluster code; all clusters are identical up
  /// to batch relabeling.
  CertificateReport certificate;
};

struct BuildOptions {
  /// Run verify_code on the cluster code and refuse to build on failure.
  bool certify = true;
  std::uint64_t certificate_seed = 0x5eed;
};

/// Throws ConfigError for invalid configs and std::runtime_error when the
/// code certificate fails.
SchemeInstance build_scheme(const SchemeConfig& cfg, const BuildOptions& options = {});

enum class DecodeCheck {
  /// Distinct rows >= threshold (or the hybrid average row) per cluster.
  Threshold,
  /// Full least-squares decode after every new distinct row.
  Solve,
};

struct RunOptions {
  DecodeCheck check = DecodeCheck::Threshold;
  /// Count distinct (cluster, row) messages instead of every received message.
  bool distinct_comm_load = false;
};

/// Replays one iteration. Messages become ready at T_w[computations_required]
/// and are processed in (ready time, worker, row) order until every cluster
/// decodes. comm_load counts every message ready no later than completion.
IterationOutcome run_iteration(const SchemeInstance& instance, const IterationTimelines& timelines,
                               const RunOptions& options = {});

struct TrialRecord {
  std::int64_t trial = 0;
  double completion_time = 0.0;
  std::int64_t comm_load = 0;
  bool decodable = false;
};

struct ExperimentResult {
  MetricsSummary summary;
  std::vector<TrialRecord> trials;
};

struct ExperimentOptions {
  RunOptions run;
  /// 0 picks GCMMC_THREADS from the environment, else hardware concurrency.
  int threads = 0;
};

/// Number of worker threads used when options.threads == 0.
int default_thread_count();

/// Runs cfg.iterations independent trials. Trial t draws its timelines from
/// trial_seed(cfg.seed, t), so schemes sharing a seed see the same draws.
ExperimentResult run_experiment(const SchemeConfig& cfg, const ExperimentOptions& options = {});

/// Same as above with a prebuilt instance.
ExperimentResult run_experiment(const SchemeInstance& instance, const SchemeConfig& cfg,
                                const ExperimentOptions& options = {});

struct NamedConfig {
  std::string name;
  SchemeConfig config;
};

/// One result per entry. Entries must share K, r, mu, alpha, iterations and seed.
std::vector<ExperimentResult> compare_schemes(const std::vector<NamedConfig>& configs,
                                              const ExperimentOptions& options = {});

}  // namespace gcmmc
