#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gcmmc {

/// Thrown when a construction precondition is violated (bad sizes, bad orders,
/// config/scheme mismatch).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Scheme {
  GC,
  FractionalRepetition,
  UC_MMC,
  GC_MMC_Correlated,
  GC_MMC_Uncorrelated,
  Hybrid,
};

std::string_view to_string(Scheme scheme);
/// Accepts the canonical names ("gc", "fractional_repetition", "uc_mmc",
/// "gc_mmc_correlated", "gc_mmc_uncorrelated", "hybrid").
Scheme scheme_from_string(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::GC;
  int K = 1;
  int r = 1;
  int P = 1;
  /// Order of every coded message in the correlated design.
  int m = 0;
  /// [m_0, ..., m_l] with m_0 = r, nonincreasing. Used by the uncorrelated
  /// design (and by Hybrid when nonempty).
  std::vector<int> order_vector;
  double mu = 10.0;
  double alpha = 0.01;
  std::int64_t iterations = 1000;
  std::uint64_t seed = 1;
};

/// Empty when the configuration is valid; otherwise one message per
/// violated invariant.
using ValidationReport = std::vector<std::string>;

ValidationReport validate_config(const SchemeConfig& cfg);

struct Cluster {
  std::vector<int> workers;
  std::vector<int> batches;
};

struct ClusterPartition {
  std::vector<Cluster> clusters;

  int cluster_size() const {
    return clusters.empty() ? 0 : static_cast<int>(clusters.front().workers.size());
  }
};

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary N x K~ mask. Row i lists the partial gradients that coded message i
/// may combine; row_owner[i] lists the real (cluster-local) workers able to
/// send it.
struct SupportMatrix {
  BinaryMatrix mask;
  std::vector<std::vector<int>> row_owner;

  int rows() const { return static_cast<int>(mask.rows()); }
  int cols() const { return static_cast<int>(mask.cols()); }
  bool at(int i, int k) const { return mask(i, k) != 0; }
  int row_weight(int i) const;
  int column_zeros(int k) const;
  std::vector<int> row_support(int i) const;
};

struct EncodingMatrix {
  Eigen::MatrixXd B;
  Eigen::VectorXd eval_points;
  double target_point = 0.0;
  int degree = 0;
  /// 2-norm condition number of the Chebyshev-basis interpolation matrix
  /// at eval_points.
  double condition_number = 1.0;

  int rows() const { return static_cast<int>(B.rows()); }
  int cols() const { return static_cast<int>(B.cols()); }
};

struct ScheduledMessage {
  int row = 0;
  int computations_required = 0;

  friend bool operator==(const ScheduledMessage&, const ScheduledMessage&) = default;
};

/// Per real (cluster-local) worker, the coded messages it sends in order.
struct MessageSchedule {
  std::vector<std::vector<ScheduledMessage>> per_worker;
};

/// finish[s-1] is the completion time of the worker's s-th local computation.
struct WorkerTimeline {
  std::vector<double> finish;

  double at(int computations) const { return finish.at(static_cast<std::size_t>(computations - 1)); }
  int computations() const { return static_cast<int>(finish.size()); }
};

using IterationTimelines = std::vector<WorkerTimeline>;

struct ReceivedRow {
  int cluster = 0;
  int row = 0;
};

struct IterationOutcome {
  double completion_time = std::numeric_limits<double>::infinity();
  std::int64_t comm_load = 0;
  std::vector<ReceivedRow> rows_used;
  bool decodable = false;
};

struct MetricsSummary {
  std::string name;
  SchemeConfig config;
  double mean_completion_time = 0.0;
  double stderr_completion_time = 0.0;
  double mean_comm_load = 0.0;
  double stderr_comm_load = 0.0;
  std::int64_t trials = 0;
  std::int64_t undecodable = 0;
};

}  // namespace gcmmc
