#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gcmmc/model.hpp"

namespace gcmmc {

/// h + 1, where h is the zero count of the sparsest column of the mask.
/// Throws ConfigError on an all-zero column.
int decode_threshold(const SupportMatrix& support);

struct EvaluationPoints {
  Eigen::VectorXd points;
  double target = 0.0;
  double condition_number = 1.0;
};

/// N + 1 Chebyshev nodes of the first kind on [-1, 1]. The middle node is the
/// target point, the rest are the evaluation points.
EvaluationPoints choose_evaluation_points(int n);

/// Column k is the polynomial f_k(x) = (1/K~) prod_{j in Z_k} (x - a_j) / (g - a_j)
/// evaluated at every evaluation point, where Z_k are the rows with a zero in
/// column k and g is the target point. Every f_k(g) = 1/K~ and f_k vanishes
/// on Z_k.
EncodingMatrix build_encoding_matrix(const SupportMatrix& support);

enum class DecodeStatus { Decoded, Infeasible, NumericalFailure };

struct DecodeSolution {
  std::vector<int> rows;
  Eigen::VectorXd coefficients;
  /// max_k |sum_i a_i B(i,k) - target_weight|
  double residual = 0.0;
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Infeasible;
  DecodeSolution solution;
  double tolerance = 0.0;

  bool decoded() const { return status == DecodeStatus::Decoded; }
};

/// Least-squares solve of a^T R = w 1^T for an arbitrary received coefficient
/// matrix R (one row per message). Decoded iff the residual is within
/// 1e-8 * max(1, ||R||_inf).
DecodeResult solve_combination(const Eigen::MatrixXd& received, double target_weight);

/// Decodes from a subset of rows of B. Duplicate row indices are merged.
DecodeResult decode(std::span<const int> rows, const EncodingMatrix& code);

/// Interpolation route: picks h + 1 of the received rows (those nearest the
/// target point) and uses the Lagrange basis at the target as coefficients.
/// Requires at least h + 1 distinct rows.
DecodeResult decode_by_interpolation(std::span<const int> rows, const EncodingMatrix& code);

struct CertificateReport {
  bool passed = false;
  int threshold = 0;
  bool exhaustive = false;
  std::int64_t subsets_checked = 0;
  double worst_residual = 0.0;
  /// First subset that failed to decode, empty on pass.
  std::vector<int> failing_subset;
  double condition_number = 1.0;
};

inline constexpr int kExhaustiveRowLimit = 16;
inline constexpr std::int64_t kCertificateSamples = 10000;

/// Checks that every threshold-size row subset decodes: exhaustively for
/// N <= 16 rows, otherwise on `samples` seeded random subsets.
CertificateReport verify_code(const EncodingMatrix& code, int threshold, std::uint64_t seed = 0x5eed,
                              std::int64_t samples = kCertificateSamples);

}  // namespace gcmmc
