#include "gcmmc/gradcheck.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace gcmmc {

namespace {

struct ClusterMessages {
  std::vector<int> rows;
  std::vector<int> senders;  // cluster-local worker that produced rows[i]
};

ClusterMessages received_messages(const SchemeInstance& instance, std::size_t c, const StragglerPattern& pattern) {
  const auto& code = instance.clusters[c];
  const auto& workers = instance.partition.clusters[c].workers;
  ClusterMessages out;
  std::vector<char> seen(static_cast<std::size_t>(code.message_count()), 0);
  for (std::size_t lw = 0; lw < workers.size(); ++lw) {
    const int progress = pattern.progress.at(static_cast<std::size_t>(workers[lw]));
    for (const auto& msg : code.schedule.per_worker[lw]) {
      if (msg.computations_required > progress) break;
      if (seen[static_cast<std::size_t>(msg.row)]) continue;
      seen[static_cast<std::size_t>(msg.row)] = 1;
      out.rows.push_back(msg.row);
      out.senders.push_back(static_cast<int>(lw));
    }
  }
  return out;
}

}  // namespace

RegressionProblem make_regression_problem(int batch_count, int rows_per_batch, int dim, std::uint64_t seed) {
  if (batch_count < 1 || rows_per_batch < 1 || dim < 1) throw std::invalid_argument("problem sizes must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RegressionProblem p;
  p.batch_count = batch_count;
  const int n = batch_count * rows_per_batch;
  p.X.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) p.X(i, j) = normal(rng);
  }
  Eigen::VectorXd truth(dim);
  for (int j = 0; j < dim; ++j) truth(j) = normal(rng);
  p.y = p.X * truth;
  for (int i = 0; i < n; ++i) p.y(i) += 0.1 * normal(rng);
  p.batch_of.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p.batch_of[static_cast<std::size_t>(i)] = i / rows_per_batch;
  return p;
}

Eigen::VectorXd partial_gradient(const RegressionProblem& problem, int batch, const Eigen::VectorXd& theta) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(problem.dim());
  int count = 0;
  for (Eigen::Index i = 0; i < problem.X.rows(); ++i) {
    if (problem.batch_of[static_cast<std::size_t>(i)] != batch) continue;
    const double residual = problem.X.row(i).dot(theta) - problem.y(i);
    g += 2.0 * residual * problem.X.row(i).transpose();
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empty batch " + std::to_string(batch));
  return g / count;
}

Eigen::MatrixXd partial_gradients(const RegressionProblem& problem, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd G(problem.dim(), problem.batch_count);
  for (int k = 0; k < problem.batch_count; ++k) G.col(k) = partial_gradient(problem, k, theta);
  return G;
}

double mean_loss(const RegressionProblem& problem, const Eigen::VectorXd& theta) {
  return (problem.X * theta - problem.y).squaredNorm() / static_cast<double>(problem.X.rows());
}

bool pattern_decodable(const SchemeInstance& instance, const StragglerPattern& pattern) {
  for (std::size_t c = 0; c < instance.clusters.size(); ++c) {
    const auto& code = instance.clusters[c];
    const auto msgs = received_messages(instance, c, pattern);
    const bool average = std::any_of(msgs.rows.begin(), msgs.rows.end(),
                                     [&](int row) { return code.is_average_row(row); });
    const int coded = static_cast<int>(msgs.rows.size()) - (average ? 1 : 0);
    if (!average && coded < code.threshold) return false;
  }
  return true;
}

StragglerPattern random_admissible_pattern(const SchemeInstance& instance, Rng& rng) {
  StragglerPattern pattern;
  pattern.progress.resize(static_cast<std::size_t>(instance.K));
  std::uniform_int_distribution<int> progress(0, instance.r);
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (auto& p : pattern.progress) p = progress(rng);
    if (pattern_decodable(instance, pattern)) return pattern;
  }
  // Cut a sampled iteration at its decoding instant.
  const auto timelines = sample_iteration(1.0, 0.01, instance.r, instance.K, rng);
  const auto outcome = run_iteration(instance, timelines);
  for (int w = 0; w < instance.K; ++w) {
    const auto& t = timelines[static_cast<std::size_t>(w)].finish;
    pattern.progress[static_cast<std::size_t>(w)] =
        static_cast<int>(std::upper_bound(t.begin(), t.end(), outcome.completion_time) - t.begin());
  }
  return pattern;
}

RoundTripReport coded_round_trip(const SchemeInstance& instance, const Eigen::MatrixXd& gradients,
                                 const StragglerPattern& pattern) {
  if (gradients.cols() != instance.K) throw std::invalid_argument("need one gradient column per batch");
  if (static_cast<int>(pattern.progress.size()) != instance.K) {
    throw std::invalid_argument("pattern must cover every worker");
  }
  RoundTripReport report;
  report.expected = gradients.rowwise().mean();
  report.decoded = Eigen::VectorXd::Zero(gradients.rows());

  for (std::size_t c = 0; c < instance.clusters.size(); ++c) {
    const auto& code = instance.clusters[c];
    const auto& batches = instance.partition.clusters[c].batches;
    const int n = code.batches();
    const auto base = build_cyclic_assignment(n, instance.r);
    const auto msgs = received_messages(instance, c, pattern);
    if (msgs.rows.empty()) {
      report.status = RoundTripStatus::Infeasible;
      report.failed_cluster = static_cast<int>(c);
      return report;
    }

    Eigen::MatrixXd received(static_cast<Eigen::Index>(msgs.rows.size()), n);
    Eigen::MatrixXd coded(gradients.rows(), static_cast<Eigen::Index>(msgs.rows.size()));
    for (std::size_t i = 0; i < msgs.rows.size(); ++i) {
      const auto coef = code.coefficients(msgs.rows[i]);
      received.row(static_cast<Eigen::Index>(i)) = coef;
      // The sender only touches the batches it has computed so far.
      const auto order = computation_order(base, msgs.senders[i]);
      const int done = pattern.progress[static_cast<std::size_t>(instance.partition.clusters[c].workers[
          static_cast<std::size_t>(msgs.senders[i])])];
      Eigen::VectorXd message = Eigen::VectorXd::Zero(gradients.rows());
      for (int t = 0; t < done; ++t) {
        const int k = order[static_cast<std::size_t>(t)];
        message += coef(k) * gradients.col(batches[static_cast<std::size_t>(k)]);
      }
      coded.col(static_cast<Eigen::Index>(i)) = message;
    }

    const auto result = solve_combination(received, 1.0 / n);
    if (!result.decoded()) {
      report.status = result.status == DecodeStatus::NumericalFailure ? RoundTripStatus::NumericalFailure
                                                                      : RoundTripStatus::Infeasible;
      report.failed_cluster = static_cast<int>(c);
      return report;
    }
    const Eigen::VectorXd cluster_average = coded * result.solution.coefficients;
    report.decoded += (static_cast<double>(n) / instance.K) * cluster_average;
  }

  double scale = report.expected.cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = gradients.cwiseAbs().maxCoeff();
  const double err = (report.decoded - report.expected).cwiseAbs().maxCoeff();
  report.relative_error = scale > 0.0 ? err / scale : err;
  report.status = report.relative_error <= kRoundTripTolerance ? RoundTripStatus::Recovered : RoundTripStatus::Mismatch;
  return report;
}

RoundTripReport coded_round_trip(const RegressionProblem& problem, const SchemeInstance& instance,
                                 const StragglerPattern& pattern, const Eigen::VectorXd& theta) {
  if (problem.batch_count != instance.K) throw std::invalid_argument("problem batch count must equal K");
  return coded_round_trip(instance, partial_gradients(problem, theta), pattern);
}

DgdTrace run_dgd(const RegressionProblem& problem, const SchemeInstance& instance, int steps, double learning_rate,
                 const Eigen::VectorXd& theta0, Rng& rng) {
  DgdTrace trace;
  Eigen::VectorXd theta = theta0;
  trace.trajectory.push_back(theta);
  trace.loss.push_back(mean_loss(problem, theta));
  int rising = 0;
  for (int step = 0; step < steps; ++step) {
    const auto pattern = random_admissible_pattern(instance, rng);
    const auto report = coded_round_trip(problem, instance, pattern, theta);
    if (report.status == RoundTripStatus::Infeasible || report.status == RoundTripStatus::NumericalFailure) {
      throw std::runtime_error("coded gradient failed to decode at step " + std::to_string(step));
    }
    theta -= learning_rate * report.decoded;
    trace.trajectory.push_back(theta);
    trace.loss.push_back(mean_loss(problem, theta));
    rising = trace.loss.back() > trace.loss[trace.loss.size() - 2] ? rising + 1 : 0;
    if (rising > 10) trace.diverged = true;
  }
  return trace;
}

}  // namespace gcmmc
