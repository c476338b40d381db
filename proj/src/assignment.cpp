#include "gcmmc/assignment.hpp"

#include <algorithm>
#include <string>

namespace gcmmc {

namespace {

int uniform_row_weight(const SupportMatrix& base) {
  if (base.rows() == 0) throw ConfigError("empty support matrix");
  const int r = base.row_weight(0);
  for (int i = 1; i < base.rows(); ++i) {
    if (base.row_weight(i) != r) throw ConfigError("support rows have nonuniform weight");
  }
  return r;
}

bool same_set(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

ClusterPartition partition_clusters(int K, int P, int batch_count) {
  if (K < 1 || P < 1 || batch_count < 1) throw ConfigError("partition sizes must be positive");
  if (K % P != 0) throw ConfigError("K mod P != 0");
  if (batch_count % P != 0) throw ConfigError("batch count mod P != 0");
  const int workers_per = K / P;
  const int batches_per = batch_count / P;
  ClusterPartition out;
  out.clusters.resize(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) {
    auto& c = out.clusters[static_cast<std::size_t>(p)];
    for (int w = 0; w < workers_per; ++w) c.workers.push_back(p * workers_per + w);
    for (int b = 0; b < batches_per; ++b) c.batches.push_back(p * batches_per + b);
  }
  return out;
}

SupportMatrix build_cyclic_assignment(int n, int r) {
  if (n < 1) throw ConfigError("assignment needs at least one column");
  if (r < 1 || r > n) throw ConfigError("r outside [1, n]");
  SupportMatrix s;
  s.mask = BinaryMatrix::Zero(n, n);
  s.row_owner.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) s.mask(i, (i + j) % n) = 1;
    s.row_owner[static_cast<std::size_t>(i)] = {i};
  }
  return s;
}

std::vector<int> computation_order(const SupportMatrix& base, int worker) {
  const int n = base.cols();
  std::vector<int> order;
  for (int j = 0; j < n; ++j) {
    const int k = (worker + j) % n;
    if (base.at(worker, k)) order.push_back(k);
  }
  return order;
}

SupportMatrix shrink_correlated(const SupportMatrix& base, int m) {
  const int r = uniform_row_weight(base);
  if (m < 1 || m > r) throw ConfigError("m outside [1, r]");
  const int n = base.rows();

  std::vector<std::vector<int>> orders;
  for (int w = 0; w < n; ++w) orders.push_back(computation_order(base, w));

  SupportMatrix out;
  out.mask = BinaryMatrix::Zero(n, base.cols());
  out.row_owner.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& order = orders[static_cast<std::size_t>(i)];
    const std::vector<int> kept(order.begin(), order.begin() + m);
    for (int k : kept) out.mask(i, k) = 1;

    for (int w = 0; w < n; ++w) {
      const auto& ow = orders[static_cast<std::size_t>(w)];
      for (int t = 0; t + m <= r; ++t) {
        if (same_set({ow.begin() + t, ow.begin() + t + m}, kept)) {
          out.row_owner[static_cast<std::size_t>(i)].push_back(w);
          break;
        }
      }
    }
  }
  return out;
}

SupportMatrix expand_virtual(const SupportMatrix& base, const std::vector<int>& order_vector) {
  const int r = uniform_row_weight(base);
  if (order_vector.empty()) throw ConfigError("order_vector is empty");
  if (order_vector.front() != r) throw ConfigError("order_vector[0] must equal r");
  for (int mj : order_vector) {
    if (mj < 1 || mj > r) throw ConfigError("order_vector entry outside [1, r]");
  }
  const int n = base.rows();
  const int per = static_cast<int>(order_vector.size());

  SupportMatrix out;
  out.mask = BinaryMatrix::Zero(n * per, base.cols());
  out.row_owner.resize(static_cast<std::size_t>(n * per));
  for (int i = 0; i < n; ++i) {
    const auto order = computation_order(base, i);
    for (int j = 0; j < per; ++j) {
      const int row = i * per + j;
      for (int t = 0; t < order_vector[static_cast<std::size_t>(j)]; ++t) {
        out.mask(row, order[static_cast<std::size_t>(t)]) = 1;
      }
      out.row_owner[static_cast<std::size_t>(row)] = {i};
    }
  }
  return out;
}

MessageSchedule build_message_schedule(const SupportMatrix& support, const CorrelatedParams& params) {
  const int n = support.rows();
  if (n != support.cols()) throw ConfigError("correlated design needs a square support");
  if (params.m < 1 || params.m > params.r || params.r > n) {
    throw ConfigError("correlated design needs 1 <= m <= r <= n");
  }
  MessageSchedule schedule;
  schedule.per_worker.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int s = 1; s <= params.r - params.m + 1; ++s) {
      const int row = (i + s - 1) % n;
      const int required = params.m + s - 1;
      if (support.row_weight(row) != params.m) throw ConfigError("support row weight differs from m");
      for (int k : support.row_support(row)) {
        if ((k - i + n) % n >= required) {
          throw ConfigError("row " + std::to_string(row) + " is not computable by worker " +
                            std::to_string(i) + " after " + std::to_string(required) + " steps");
        }
      }
      schedule.per_worker[static_cast<std::size_t>(i)].push_back({row, required});
    }
  }
  return schedule;
}

MessageSchedule build_message_schedule(const SupportMatrix& support, const UncorrelatedParams& params) {
  const int per = static_cast<int>(params.order_vector.size());
  if (per == 0) throw ConfigError("order_vector is empty");
  const int n = support.cols();
  if (support.rows() != n * per) throw ConfigError("support rows do not match order_vector length");
  MessageSchedule schedule;
  schedule.per_worker.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& list = schedule.per_worker[static_cast<std::size_t>(i)];
    for (int j = 0; j < per; ++j) {
      const int row = i * per + j;
      const int order = params.order_vector[static_cast<std::size_t>(j)];
      if (support.row_weight(row) != order) throw ConfigError("support row weight differs from order_vector");
      for (int k : support.row_support(row)) {
        if ((k - i + n) % n >= order) {
          throw ConfigError("row " + std::to_string(row) + " is not a prefix of worker " + std::to_string(i));
        }
      }
      list.push_back({row, order});
    }
    std::stable_sort(list.begin(), list.end(), [](const ScheduledMessage& a, const ScheduledMessage& b) {
      return a.computations_required < b.computations_required;
    });
  }
  return schedule;
}

}  // namespace gcmmc
