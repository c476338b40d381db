#pragma once

#include <vector>

#include "gcmmc/model.hpp"

namespace gcmmc {

enum class Design { Correlated, Uncorrelated };

/// Contiguous blocks: cluster p holds workers [p*K/P, (p+1)*K/P) and batches
/// [p*b/P, (p+1)*b/P).
ClusterPartition partition_clusters(int K, int P, int batch_count);

/// Row i covers batches {i, i+1, ..., i+r-1} mod n. Row owner of row i is worker i.
SupportMatrix build_cyclic_assignment(int n, int r);

/// Batches held by row i of a base assignment, in the order the worker
/// computes them: cyclic ascending from column i.
std::vector<int> computation_order(const SupportMatrix& base, int worker);

/// Correlated design: each row keeps the first m entries of its computation
/// order. row_owner of the result lists every worker that computes the row's
/// support as m consecutive computations.
SupportMatrix shrink_correlated(const SupportMatrix& base, int m);

/// Uncorrelated design: worker i contributes rows i*(l+1) + j, j = 0..l, whose
/// supports are the first order_vector[j] batches of its computation order.
SupportMatrix expand_virtual(const SupportMatrix& base, const std::vector<int>& order_vector);

struct CorrelatedParams {
  int r = 1;
  int m = 1;
};

struct UncorrelatedParams {
  std::vector<int> order_vector;
};

/// Worker i sends row (i+s-1) mod n after m+s-1 computations, s = 1..r-m+1.
MessageSchedule build_message_schedule(const SupportMatrix& support, const CorrelatedParams& params);

/// Worker i sends its own rows, lowest order first; the order-m_j row needs m_j
/// computations.
MessageSchedule build_message_schedule(const SupportMatrix& support, const UncorrelatedParams& params);

}  // namespace gcmmc
