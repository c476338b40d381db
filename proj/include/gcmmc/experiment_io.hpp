#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcmmc/coding.hpp"
#include "gcmmc/simulator.hpp"

namespace gcmmc {

struct OutputPaths {
  std::filesystem::path directory = ".";
  std::string trials_csv = "trials.csv";
  std::string summary_json = "summary.json";
  std::string plot_csv = "plot.csv";
};

/// Parsed experiment file. Every scheme entry already carries the shared
/// parameters.
struct ExperimentConfig {
  std::vector<NamedConfig> schemes;
  OutputPaths output;
};

/// YAML experiment file:
///
///   shared:   {K, r, mu, alpha, iterations, seed}
///   output:   {directory, trials_csv, summary_json, plot_csv}   (optional)
///   schemes:  list of {name, scheme, P, m, order_vector}
///
/// Unknown keys, duplicate names and an empty scheme list are errors
/// (ConfigError).
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);

/// trial_id,scheme,completion_time,comm_load
void write_trials_csv(std::ostream& os, const std::vector<ExperimentResult>& results);
void write_summary_json(std::ostream& os, const std::vector<ExperimentResult>& results, bool distinct_comm_load);
/// scheme,mean_completion_time,stderr_completion_time,mean_comm_load,stderr_comm_load
void write_plot_csv(std::ostream& os, const std::vector<ExperimentResult>& results);

struct EntryCorruption {
  int row = 0;
  int col = 0;
  double delta = 1.0;
};

struct SchemeVerification {
  std::string name;
  int threshold = 0;
  CertificateReport certificate;
  int patterns_checked = 0;
  int patterns_recovered = 0;
  double worst_relative_error = 0.0;

  bool passed() const { return certificate.passed && patterns_recovered == patterns_checked; }
};

/// Certificate plus a coded round-trip sweep over random admissible straggler
/// patterns. `corruption` perturbs one encoding-matrix entry of every cluster
/// before checking (negative control).
SchemeVerification verify_scheme(const NamedConfig& entry, int patterns, std::optional<EntryCorruption> corruption);

void print_verification(std::ostream& os, const SchemeVerification& v);

}  // namespace gcmmc
