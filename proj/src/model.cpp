#include "gcmmc/model.hpp"

#include <array>
#include <cmath>

namespace gcmmc {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 6> kSchemeNames{{
    {Scheme::GC, "gc"},
    {Scheme::FractionalRepetition, "fractional_repetition"},
    {Scheme::UC_MMC, "uc_mmc"},
    {Scheme::GC_MMC_Correlated, "gc_mmc_correlated"},
    {Scheme::GC_MMC_Uncorrelated, "gc_mmc_uncorrelated"},
    {Scheme::Hybrid, "hybrid"},
}};

void check_order_vector(const SchemeConfig& cfg, ValidationReport& report) {
  const auto& ov = cfg.order_vector;
  if (ov.empty()) {
    report.emplace_back("order_vector is empty");
    return;
  }
  if (ov.front() != cfg.r) report.emplace_back("order_vector[0] must equal r");
  for (std::size_t j = 0; j < ov.size(); ++j) {
    if (ov[j] < 1 || ov[j] > cfg.r) {
      report.emplace_back("order_vector[" + std::to_string(j) + "] outside [1, r]");
    }
    if (j > 0 && ov[j] > ov[j - 1]) {
      report.emplace_back("order_vector must be nonincreasing");
    }
  }
}

void check_order(const SchemeConfig& cfg, ValidationReport& report) {
  if (cfg.m < 1 || cfg.m > cfg.r) report.emplace_back("m outside [1, r]");
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

ValidationReport validate_config(const SchemeConfig& cfg) {
  ValidationReport report;
  if (cfg.K < 1) report.emplace_back("K must be positive");
  if (cfg.r < 1 || cfg.r > cfg.K) report.emplace_back("r outside [1, K]");
  if (cfg.P < 1) {
    report.emplace_back("P must be positive");
  } else if (cfg.K >= 1 && cfg.K % cfg.P != 0) {
    report.emplace_back("K mod P != 0");
  } else if (cfg.K >= 1 && cfg.r > cfg.K / cfg.P) {
    report.emplace_back("r exceeds cluster size K/P");
  }
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu)) report.emplace_back("mu must be positive");
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) report.emplace_back("alpha must be positive");
  if (cfg.iterations < 1) report.emplace_back("iterations must be positive");
  if (!report.empty()) return report;

  switch (cfg.scheme) {
    case Scheme::GC:
    case Scheme::UC_MMC:
      break;
    case Scheme::FractionalRepetition:
      if (cfg.K % cfg.r != 0) report.emplace_back("fractional repetition needs K mod r == 0");
      else if (cfg.P != cfg.K / cfg.r) report.emplace_back("fractional repetition needs P == K/r");
      break;
    case Scheme::GC_MMC_Correlated:
      check_order(cfg, report);
      break;
    case Scheme::GC_MMC_Uncorrelated:
      check_order_vector(cfg, report);
      break;
    case Scheme::Hybrid:
      if (cfg.K / cfg.P != cfg.r) report.emplace_back("hybrid needs cluster size K/P == r");
      if (cfg.order_vector.empty()) check_order(cfg, report);
      else check_order_vector(cfg, report);
      break;
  }
  return report;
}

int SupportMatrix::row_weight(int i) const {
  int w = 0;
  for (int k = 0; k < cols(); ++k) w += at(i, k) ? 1 : 0;
  return w;
}

int SupportMatrix::column_zeros(int k) const {
  int z = 0;
  for (int i = 0; i < rows(); ++i) z += at(i, k) ? 0 : 1;
  return z;
}

std::vector<int> SupportMatrix::row_support(int i) const {
  std::vector<int> s;
  for (int k = 0; k < cols(); ++k) {
    if (at(i, k)) s.push_back(k);
  }
  return s;
}

}  // namespace gcmmc
