#include "gcmmc/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gcmmc {

namespace {

constexpr double kRelativeTolerance = 1e-8;

std::vector<int> unique_rows(std::span<const int> rows, int n) {
  std::vector<int> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("decode needs at least one row");
  if (out.front() < 0 || out.back() >= n) throw std::invalid_argument("row index out of range");
  return out;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& B, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), B.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = B.row(rows[i]);
  return out;
}

double tolerance_for(const Eigen::MatrixXd& received) {
  const double inf_norm = received.rows() == 0 ? 0.0 : received.cwiseAbs().rowwise().sum().maxCoeff();
  return kRelativeTolerance * std::max(1.0, inf_norm);
}

double combination_residual(const Eigen::MatrixXd& received, const Eigen::VectorXd& a, double target_weight) {
  const Eigen::VectorXd combined = received.transpose() * a;
  return (combined.array() - target_weight).abs().maxCoeff();
}

// Van der Corput radical inverse in base 2.
double spread_key(int i) {
  double key = 0.0;
  double scale = 0.5;
  for (auto u = static_cast<unsigned>(i); u != 0; u >>= 1, scale *= 0.5) {
    if (u & 1u) key += scale;
  }
  return key;
}

}  // namespace

int decode_threshold(const SupportMatrix& support) {
  int h = 0;
  for (int k = 0; k < support.cols(); ++k) {
    const int zeros = support.column_zeros(k);
    if (zeros == support.rows()) {
      throw ConfigError("column " + std::to_string(k) + " of the support is all zero");
    }
    h = std::max(h, zeros);
  }
  return h + 1;
}

EvaluationPoints choose_evaluation_points(int n) {
  if (n < 1) throw std::invalid_argument("need at least one evaluation point");
  const int total = n + 1;
  const int target_index = n / 2;
  EvaluationPoints out;
  std::vector<double> nodes;
  for (int j = 0; j < total; ++j) {
    const double node = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * total));
    if (j == target_index) out.target = node;
    else nodes.push_back(node);
  }
  // Rows that are adjacent in index (a cyclic block of stragglers, a column's
  // zero set) get nodes spread over the whole interval.
  std::vector<int> rank(static_cast<std::size_t>(n));
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [](int a, int b) { return spread_key(a) < spread_key(b); });
  out.points.resize(n);
  for (int pos = 0; pos < n; ++pos) out.points(rank[static_cast<std::size_t>(pos)]) = nodes[static_cast<std::size_t>(pos)];

  // Chebyshev-basis interpolation matrix V(i, j) = T_j(x_i).
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = out.points(i);
    V(i, 0) = 1.0;
    if (n > 1) V(i, 1) = x;
    for (int j = 2; j < n; ++j) V(i, j) = 2.0 * x * V(i, j - 1) - V(i, j - 2);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(0) / sv(sv.size() - 1);
  return out;
}

EncodingMatrix build_encoding_matrix(const SupportMatrix& support) {
  const int n = support.rows();
  const int cols = support.cols();
  EncodingMatrix code;
  code.degree = decode_threshold(support) - 1;
  const auto ep = choose_evaluation_points(n);
  code.eval_points = ep.points;
  code.target_point = ep.target;
  code.condition_number = ep.condition_number;

  const double weight = 1.0 / cols;
  code.B = Eigen::MatrixXd::Zero(n, cols);
  for (int k = 0; k < cols; ++k) {
    std::vector<int> zeros;
    for (int i = 0; i < n; ++i) {
      if (!support.at(i, k)) zeros.push_back(i);
    }
    for (int i = 0; i < n; ++i) {
      if (!support.at(i, k)) continue;
      double value = weight;
      for (int j : zeros) {
        value *= (code.eval_points(i) - code.eval_points(j)) / (code.target_point - code.eval_points(j));
      }
      code.B(i, k) = value;
    }
  }
  return code;
}

DecodeResult solve_combination(const Eigen::MatrixXd& received, double target_weight) {
  DecodeResult result;
  result.tolerance = tolerance_for(received);
  const Eigen::MatrixXd A = received.transpose();
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(A.rows(), target_weight);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd a = cod.solve(b);
  result.solution.coefficients = a;
  if (!a.allFinite()) {
    result.status = DecodeStatus::NumericalFailure;
    result.solution.residual = std::numeric_limits<double>::infinity();
    return result;
  }
  result.solution.residual = combination_residual(received, a, target_weight);
  if (!std::isfinite(result.solution.residual)) {
    result.status = DecodeStatus::NumericalFailure;
  } else {
    result.status = result.solution.residual <= result.tolerance ? DecodeStatus::Decoded : DecodeStatus::Infeasible;
  }
  return result;
}

DecodeResult decode(std::span<const int> rows, const EncodingMatrix& code) {
  const auto distinct = unique_rows(rows, code.rows());
  auto result = solve_combination(gather_rows(code.B, distinct), 1.0 / code.cols());
  result.solution.rows = distinct;
  return result;
}

DecodeResult decode_by_interpolation(std::span<const int> rows, const EncodingMatrix& code) {
  auto distinct = unique_rows(rows, code.rows());
  const auto needed = static_cast<std::size_t>(code.degree + 1);
  if (distinct.size() < needed) throw std::invalid_argument("interpolation needs at least h + 1 rows");

  const double g = code.target_point;
  std::stable_sort(distinct.begin(), distinct.end(), [&](int a, int b) {
    return std::abs(code.eval_points(a) - g) < std::abs(code.eval_points(b) - g);
  });
  distinct.resize(needed);
  std::sort(distinct.begin(), distinct.end());

  Eigen::VectorXd a(static_cast<Eigen::Index>(needed));
  for (std::size_t i = 0; i < needed; ++i) {
    const double xi = code.eval_points(distinct[i]);
    double basis = 1.0;
    for (std::size_t j = 0; j < needed; ++j) {
      if (j == i) continue;
      const double xj = code.eval_points(distinct[j]);
      basis *= (g - xj) / (xi - xj);
    }
    a(static_cast<Eigen::Index>(i)) = basis;
  }

  const Eigen::MatrixXd received = gather_rows(code.B, distinct);
  DecodeResult result;
  result.tolerance = tolerance_for(received);
  result.solution.rows = distinct;
  result.solution.coefficients = a;
  result.solution.residual = combination_residual(received, a, 1.0 / code.cols());
  if (!a.allFinite() || !std::isfinite(result.solution.residual)) {
    result.status = DecodeStatus::NumericalFailure;
  } else {
    result.status = result.solution.residual <= result.tolerance ? DecodeStatus::Decoded : DecodeStatus::Infeasible;
  }
  return result;
}

CertificateReport verify_code(const EncodingMatrix& code, int threshold, std::uint64_t seed, std::int64_t samples) {
  CertificateReport report;
  report.threshold = threshold;
  report.condition_number = code.condition_number;
  const int n = code.rows();
  if (threshold < 1 || threshold > n) return report;

  auto check = [&](const std::vector<int>& subset) {
    ++report.subsets_checked;
    const auto result = decode(subset, code);
    report.worst_residual = std::max(report.worst_residual, result.solution.residual);
    if (!result.decoded()) {
      report.failing_subset = subset;
      return false;
    }
    return true;
  };

  if (n <= kExhaustiveRowLimit) {
    report.exhaustive = true;
    std::vector<int> subset(static_cast<std::size_t>(threshold));
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
      if (!check(subset)) return report;
      int i = threshold - 1;
      while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - threshold + i) --i;
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < threshold; ++j) {
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (std::int64_t s = 0; s < samples; ++s) {
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < threshold; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      }
      std::vector<int> subset(pool.begin(), pool.begin() + threshold);
      std::sort(subset.begin(), subset.end());
      if (!check(subset)) return report;
    }
  }
  report.passed = true;
  return report;
}

}  // namespace gcmmc
