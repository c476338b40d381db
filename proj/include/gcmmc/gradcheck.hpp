#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gcmmc/runtime.hpp"
#include "gcmmc/simulator.hpp"

namespace gcmmc {

/// Least-squares data split into equal, non-overlapping, contiguous batches.
struct RegressionProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<int> batch_of;
  int batch_count = 0;

  int dim() const { return static_cast<int>(X.cols()); }
};

RegressionProblem make_regression_problem(int batch_count, int rows_per_batch, int dim, std::uint64_t seed);

/// (1/|B_k|) sum_{i in B_k} 2 x_i (x_i^T theta - y_i). Throws on an empty batch.
Eigen::VectorXd partial_gradient(const RegressionProblem& problem, int batch, const Eigen::VectorXd& theta);

/// d x batch_count, column k is partial_gradient(k).
Eigen::MatrixXd partial_gradients(const RegressionProblem& problem, const Eigen::VectorXd& theta);

/// Mean squared residual over the whole dataset.
double mean_loss(const RegressionProblem& problem, const Eigen::VectorXd& theta);

/// Local computations finished by every real worker (0..r), in global worker order.
struct StragglerPattern {
  std::vector<int> progress;
};

/// True when every cluster has threshold-many distinct coded rows (or the
/// hybrid average) among the messages the pattern allows.
bool pattern_decodable(const SchemeInstance& instance, const StragglerPattern& pattern);

/// Random admissible pattern: uniform progress vectors first, then a
/// shifted-exponential draw cut at its decoding instant.
StragglerPattern random_admissible_pattern(const SchemeInstance& instance, Rng& rng);

enum class RoundTripStatus { Recovered, Infeasible, NumericalFailure, Mismatch };

struct RoundTripReport {
  RoundTripStatus status = RoundTripStatus::Infeasible;
  Eigen::VectorXd decoded;
  Eigen::VectorXd expected;
  /// ||decoded - expected||_inf / ||expected||_inf (scale falls back to the
  /// largest partial gradient entry when expected is zero).
  double relative_error = 0.0;
  int failed_cluster = -1;
};

inline constexpr double kRoundTripTolerance = 1e-8;

/// Workers encode the columns of `gradients` (d x K) they have computed, the
/// master decodes every cluster and recombines with weights K~/K.
RoundTripReport coded_round_trip(const SchemeInstance& instance, const Eigen::MatrixXd& gradients,
                                 const StragglerPattern& pattern);

RoundTripReport coded_round_trip(const RegressionProblem& problem, const SchemeInstance& instance,
                                 const StragglerPattern& pattern, const Eigen::VectorXd& theta);

struct DgdTrace {
  std::vector<Eigen::VectorXd> trajectory;
  std::vector<double> loss;
  /// Loss rose for more than 10 consecutive steps.
  bool diverged = false;
};

/// Coded distributed gradient descent with a fresh admissible straggler
/// pattern per step. Throws std::runtime_error if a step fails to decode.
DgdTrace run_dgd(const RegressionProblem& problem, const SchemeInstance& instance, int steps, double learning_rate,
                 const Eigen::VectorXd& theta0, Rng& rng);

}  // namespace gcmmc
