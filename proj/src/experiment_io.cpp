#include "gcmmc/experiment_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "gcmmc/gradcheck.hpp"

namespace gcmmc {

namespace {

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_if(const YAML::Node& node, const char* key, T& out) {
  if (node[key]) out = node[key].as<T>();
}

nlohmann::ordered_json config_json(const SchemeConfig& c) {
  nlohmann::ordered_json j;
  j["scheme"] = std::string(to_string(c.scheme));
  j["K"] = c.K;
  j["r"] = c.r;
  j["P"] = c.P;
  j["m"] = c.m;
  j["order_vector"] = c.order_vector;
  j["mu"] = c.mu;
  j["alpha"] = c.alpha;
  j["iterations"] = c.iterations;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig out;
  try {
    const YAML::Node root = YAML::Load(std::string(text));
    if (!root.IsMap()) throw ConfigError("experiment file must be a mapping");
    reject_unknown_keys(root, {"shared", "output", "schemes"}, "top level");

    SchemeConfig shared;
    if (const auto s = root["shared"]) {
      reject_unknown_keys(s, {"K", "r", "mu", "alpha", "iterations", "seed"}, "shared");
      read_if(s, "K", shared.K);
      read_if(s, "r", shared.r);
      read_if(s, "mu", shared.mu);
      read_if(s, "alpha", shared.alpha);
      read_if(s, "iterations", shared.iterations);
      read_if(s, "seed", shared.seed);
    } else {
      throw ConfigError("missing 'shared' block");
    }

    if (const auto o = root["output"]) {
      reject_unknown_keys(o, {"directory", "trials_csv", "summary_json", "plot_csv"}, "output");
      if (o["directory"]) out.output.directory = o["directory"].as<std::string>();
      read_if(o, "trials_csv", out.output.trials_csv);
      read_if(o, "summary_json", out.output.summary_json);
      read_if(o, "plot_csv", out.output.plot_csv);
    }

    const auto schemes = root["schemes"];
    if (!schemes || !schemes.IsSequence() || schemes.size() == 0) throw ConfigError("no schemes");
    std::set<std::string> names;
    for (const auto& entry : schemes) {
      reject_unknown_keys(entry, {"name", "scheme", "P", "m", "order_vector"}, "scheme entry");
      NamedConfig nc;
      if (!entry["name"] || !entry["scheme"]) throw ConfigError("scheme entry needs 'name' and 'scheme'");
      nc.name = entry["name"].as<std::string>();
      if (!names.insert(nc.name).second) throw ConfigError("duplicate scheme name '" + nc.name + "'");
      nc.config = shared;
      nc.config.scheme = scheme_from_string(entry["scheme"].as<std::string>());
      read_if(entry, "P", nc.config.P);
      read_if(entry, "m", nc.config.m);
      read_if(entry, "order_vector", nc.config.order_vector);
      out.schemes.push_back(std::move(nc));
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return out;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return {buf, end};
}

void write_trials_csv(std::ostream& os, const std::vector<ExperimentResult>& results) {
  os << "trial_id,scheme,completion_time,comm_load\n";
  for (const auto& res : results) {
    for (const auto& t : res.trials) {
      os << t.trial << ',' << res.summary.name << ',' << format_double(t.completion_time) << ',' << t.comm_load
         << '\n';
    }
  }
}

void write_summary_json(std::ostream& os, const std::vector<ExperimentResult>& results, bool distinct_comm_load) {
  nlohmann::ordered_json root;
  root["comm_load_mode"] = distinct_comm_load ? "distinct_rows" : "all_messages";
  auto& list = root["schemes"] = nlohmann::ordered_json::array();
  for (const auto& res : results) {
    const auto& s = res.summary;
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["config"] = config_json(s.config);
    j["completion_time"] = {{"mean", s.mean_completion_time}, {"stderr", s.stderr_completion_time}};
    j["comm_load"] = {{"mean", s.mean_comm_load}, {"stderr", s.stderr_comm_load}};
    j["trials"] = s.trials;
    j["undecodable"] = s.undecodable;
    list.push_back(std::move(j));
  }
  os << root.dump(2) << '\n';
}

void write_plot_csv(std::ostream& os, const std::vector<ExperimentResult>& results) {
  os << "scheme,mean_completion_time,stderr_completion_time,mean_comm_load,stderr_comm_load\n";
  for (const auto& res : results) {
    const auto& s = res.summary;
    os << s.name << ',' << format_double(s.mean_completion_time) << ',' << format_double(s.stderr_completion_time)
       << ',' << format_double(s.mean_comm_load) << ',' << format_double(s.stderr_comm_load) << '\n';
  }
}

SchemeVerification verify_scheme(const NamedConfig& entry, int patterns, std::optional<EntryCorruption> corruption) {
  SchemeVerification v;
  v.name = entry.name;
  auto instance = build_scheme(entry.config, BuildOptions{.certify = false});
  if (corruption) {
    for (auto& code : instance.clusters) {
      auto& B = code.encoding.B;
      if (corruption->row < 0 || corruption->row >= B.rows() || corruption->col < 0 || corruption->col >= B.cols()) {
        throw ConfigError("corruption entry outside the encoding matrix");
      }
      B(corruption->row, corruption->col) += corruption->delta;
    }
  }
  const auto& code = instance.clusters.front();
  v.threshold = code.threshold;
  v.certificate = verify_code(code.encoding, code.threshold);

  Rng rng(entry.config.seed);
  const auto problem = make_regression_problem(entry.config.K, 4, 3, entry.config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < patterns; ++i) {
    Eigen::VectorXd theta(problem.dim());
    for (int j = 0; j < theta.size(); ++j) theta(j) = normal(rng);
    const auto pattern = random_admissible_pattern(instance, rng);
    const auto report = coded_round_trip(problem, instance, pattern, theta);
    ++v.patterns_checked;
    if (report.status == RoundTripStatus::Recovered) ++v.patterns_recovered;
    v.worst_relative_error = std::max(v.worst_relative_error, report.relative_error);
  }
  return v;
}

void print_verification(std::ostream& os, const SchemeVerification& v) {
  const auto& c = v.certificate;
  os << v.name << ": threshold " << v.threshold << ", certificate " << (c.passed ? "pass" : "FAIL") << " ("
     << c.subsets_checked << (c.exhaustive ? " subsets, exhaustive" : " sampled subsets")
     << ", worst residual " << format_double(c.worst_residual) << ", condition number "
     << format_double(c.condition_number) << ")\n";
  if (!c.passed && !c.failing_subset.empty()) {
    os << "  failing subset: {";
    for (std::size_t i = 0; i < c.failing_subset.size(); ++i) os << (i ? "," : "") << c.failing_subset[i];
    os << "}\n";
  }
  os << "  round trip: " << v.patterns_recovered << "/" << v.patterns_checked << " patterns recovered, worst error "
     << format_double(v.worst_relative_error) << "\n";
  os << "  " << (v.passed() ? "PASS" : "FAIL") << "\n";
}

}  // namespace gcmmc
