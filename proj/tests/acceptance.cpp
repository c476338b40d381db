// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gcmmc/assignment.hpp"
#include "gcmmc/coding.hpp"
#include "gcmmc/experiment_io.hpp"
#include "gcmmc/gradcheck.hpp"
#include "gcmmc/runtime.hpp"
#include "gcmmc/simulator.hpp"

using namespace gcmmc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SchemeConfig make(Scheme s, int K, int r, int P, int m = 0, std::vector<int> ov = {}) {
  SchemeConfig c;
  c.scheme = s;
  c.K = K;
  c.r = r;
  c.P = P;
  c.m = m;
  c.order_vector = std::move(ov);
  return c;
}

std::vector<std::vector<int>> subsets(int n, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == t) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Outcome decoding_identity() {
  const auto start = Clock::now();
  std::vector<SchemeConfig> configs;
  for (int P : {1, 2}) {
    configs.push_back(make(Scheme::GC, 12, 3, P));
    configs.push_back(make(Scheme::UC_MMC, 12, 3, P));
    configs.push_back(make(Scheme::GC_MMC_Correlated, 12, 3, P, 2));
    configs.push_back(make(Scheme::GC_MMC_Uncorrelated, 12, 3, P, 0, {3, 2, 1}));
  }
  // These two need one cluster per r workers.
  configs.push_back(make(Scheme::FractionalRepetition, 12, 3, 4));
  configs.push_back(make(Scheme::Hybrid, 12, 3, 4, 0, {3, 2}));

  const auto problem = make_regression_problem(12, 6, 5, 101);
  Rng rng(202);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  int failures = 0;
  for (const auto& cfg : configs) {
    const auto inst = build_scheme(cfg);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd theta(problem.dim());
      for (int j = 0; j < theta.size(); ++j) theta(j) = normal(rng);
      const auto pat = random_admissible_pattern(inst, rng);
      const auto rep = coded_round_trip(problem, inst, pat, theta);
      if (rep.status != RoundTripStatus::Recovered || !(rep.relative_error <= 1e-8)) ++failures;
      worst = std::max(worst, rep.relative_error);
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << configs.size() << " schemes x 100 patterns, " << failures << " failures, worst relative error " << worst
     << ", " << elapsed << " s";
  return {failures == 0 && elapsed < 60.0, os.str()};
}

Outcome threshold_certificates() {
  const auto cyclic = build_cyclic_assignment(6, 3);
  const auto cyclic_code = build_encoding_matrix(cyclic);
  int cyclic_fail = 0;
  for (const auto& s : subsets(6, 4)) cyclic_fail += decode(s, cyclic_code).decoded() ? 0 : 1;

  const auto virt = expand_virtual(cyclic, {3, 2});
  const auto virt_code = build_encoding_matrix(virt);
  int virt_fail = 0;
  for (const auto& s : subsets(12, 8)) virt_fail += decode(s, virt_code).decoded() ? 0 : 1;
  int infeasible7 = 0;
  for (const auto& s : subsets(12, 7)) infeasible7 += decode(s, virt_code).decoded() ? 0 : 1;

  std::ostringstream os;
  os << "6x3 thr " << decode_threshold(cyclic) << ": " << cyclic_fail << "/15 fail; 12x6 thr "
     << decode_threshold(virt) << ": " << virt_fail << "/495 fail; infeasible 7-subsets " << infeasible7 << "/792";
  return {decode_threshold(cyclic) == 4 && decode_threshold(virt) == 8 && cyclic_fail == 0 && virt_fail == 0 &&
              infeasible7 > 0,
          os.str()};
}

Outcome straggler_tolerance() {
  const auto inst = build_scheme(make(Scheme::GC, 6, 3, 1));
  const auto problem = make_regression_problem(6, 4, 3, 303);
  const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(3, -0.5, 0.7);
  int two_ok = 0;
  const auto twos = subsets(6, 2);
  for (const auto& removed : twos) {
    StragglerPattern pat{std::vector<int>(6, 3)};
    for (int w : removed) pat.progress[static_cast<std::size_t>(w)] = 0;
    if (coded_round_trip(problem, inst, pat, theta).status == RoundTripStatus::Recovered) ++two_ok;
  }
  int three_fail = 0;
  for (const auto& removed : subsets(6, 3)) {
    StragglerPattern pat{std::vector<int>(6, 3)};
    for (int w : removed) pat.progress[static_cast<std::size_t>(w)] = 0;
    if (coded_round_trip(problem, inst, pat, theta).status != RoundTripStatus::Recovered) ++three_fail;
  }
  std::ostringstream os;
  os << "2 removed: " << two_ok << "/" << twos.size() << " recovered; 3 removed: " << three_fail
     << "/20 fail (negative control)";
  return {two_ok == static_cast<int>(twos.size()) && three_fail > 0, os.str()};
}

Outcome runtime_model() {
  const double mu = 10.0, alpha = 0.01;
  const int n = 100000;
  std::vector<std::vector<double>> samples(3);
  const int steps[3] = {1, 5, 10};
  for (int j = 0; j < 3; ++j) {
    // Separate streams so the three checks are independent.
    Rng rng(404 + static_cast<std::uint64_t>(j));
    for (int i = 0; i < n; ++i) samples[j].push_back(sample_timeline(mu, alpha, 10, rng).at(steps[j]));
  }
  bool ok = true;
  std::ostringstream os;
  for (int j = 0; j < 3; ++j) {
    auto& x = samples[j];
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double F = completion_cdf(mu, alpha, steps[j], x[static_cast<std::size_t>(i)]);
      d = std::max({d, (i + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    ok = ok && d < 0.01;
    os << (j ? ", " : "") << "KS(s=" << steps[j] << ") " << d;
  }
  return {ok, os.str()};
}

SchemeConfig benchmark_config(Scheme s, int P, int m = 0, std::vector<int> ov = {}) {
  auto c = make(s, 40, 10, P, m, std::move(ov));
  c.mu = 10.0;
  c.alpha = 0.01;
  c.iterations = 10000;
  c.seed = 2021;
  return c;
}

Outcome gc_mean() {
  const auto start = Clock::now();
  auto cfg = benchmark_config(Scheme::GC, 1);
  cfg.iterations = 100000;
  const auto res = run_experiment(cfg);
  const double elapsed = seconds_since(start);
  // The (K-r+1)-th of K exponential order statistics, scaled by r.
  double harmonic = 0.0;
  for (int j = cfg.r; j <= cfg.K; ++j) harmonic += 1.0 / j;
  const double oracle = cfg.r * (cfg.alpha + harmonic / cfg.mu);
  const double reference = 1.5495747849681223;
  const double rel = std::abs(res.summary.mean_completion_time - reference) / reference;
  std::ostringstream os;
  os.precision(10);
  os << "mean " << res.summary.mean_completion_time << " vs " << reference << " (oracle " << oracle
     << "), rel " << rel << ", " << elapsed << " s";
  return {rel < 0.02 && std::abs(oracle - reference) < 1e-12 && elapsed < 30.0 && res.summary.undecodable == 0,
          os.str()};
}

struct BenchmarkRun {
  MetricsSummary gc, uc, mmc1, mmc2;
};

const BenchmarkRun& benchmark_run() {
  static const BenchmarkRun run = [] {
    const std::vector<NamedConfig> list{
        {"GC", benchmark_config(Scheme::GC, 1)},
        {"UC-MMC", benchmark_config(Scheme::UC_MMC, 1)},
        {"GC-MMC-1", benchmark_config(Scheme::GC_MMC_Correlated, 4, 6)},
        {"GC-MMC-2", benchmark_config(Scheme::GC_MMC_Uncorrelated, 4, 0, {10, 8, 6})},
    };
    const auto res = compare_schemes(list);
    return BenchmarkRun{res[0].summary, res[1].summary, res[2].summary, res[3].summary};
  }();
  return run;
}

bool below_3sigma(double mean_a, double se_a, double mean_b, double se_b) {
  return mean_a + 3 * se_a < mean_b - 3 * se_b;
}

Outcome ordering() {
  const auto& p = benchmark_run();
  const bool c1 = below_3sigma(p.mmc1.mean_completion_time, p.mmc1.stderr_completion_time, p.gc.mean_completion_time,
                               p.gc.stderr_completion_time);
  const bool c2 = below_3sigma(p.mmc2.mean_completion_time, p.mmc2.stderr_completion_time, p.gc.mean_completion_time,
                               p.gc.stderr_completion_time);
  const bool c3 = p.uc.mean_comm_load > p.mmc1.mean_comm_load;
  const bool c4 = p.gc.mean_comm_load >= 31 && p.gc.mean_comm_load <= 40;
  std::ostringstream os;
  os << "completion GC " << p.gc.mean_completion_time << ", GC-MMC-1 " << p.mmc1.mean_completion_time
     << ", GC-MMC-2 " << p.mmc2.mean_completion_time << "; comm_load UC-MMC " << p.uc.mean_comm_load
     << ", GC-MMC-1 " << p.mmc1.mean_comm_load << ", GC " << p.gc.mean_comm_load << " (" << p.gc.trials
     << " trials)";
  return {c1 && c2 && c3 && c4 && p.gc.trials >= 10000, os.str()};
}

Outcome mmc2_comm_load() {
  const auto& p = benchmark_run();
  std::ostringstream os;
  os << "GC-MMC-2 comm_load " << p.mmc2.mean_comm_load << " (" << p.mmc2.trials << " trials)";
  return {p.mmc2.mean_comm_load >= 32 && p.mmc2.mean_comm_load <= 48 && p.mmc2.trials >= 10000 &&
              p.mmc2.undecodable == 0,
          os.str()};
}

Outcome hybrid_dominance() {
  auto fr = make(Scheme::FractionalRepetition, 5, 5, 1);
  auto mmc = make(Scheme::GC_MMC_Uncorrelated, 5, 5, 1, 0, {5, 3});
  auto hy = make(Scheme::Hybrid, 5, 5, 1, 0, {5, 3});
  for (auto* c : {&fr, &mmc, &hy}) {
    c->iterations = 10000;
    c->seed = 505;
  }
  const auto res = compare_schemes({{"fr", fr}, {"mmc", mmc}, {"hybrid", hy}});
  int violations = 0;
  for (std::size_t t = 0; t < res[2].trials.size(); ++t) {
    const double bound = std::min(res[0].trials[t].completion_time, res[1].trials[t].completion_time);
    if (!(res[2].trials[t].completion_time <= bound)) ++violations;
  }
  std::ostringstream os;
  os << violations << " violations over " << res[2].trials.size() << " shared draws; means hybrid "
     << res[2].summary.mean_completion_time << ", FR " << res[0].summary.mean_completion_time << ", GC-MMC "
     << res[1].summary.mean_completion_time;
  return {violations == 0 && res[2].trials.size() == 10000, os.str()};
}

Outcome determinism() {
  auto render = [](int threads) {
    std::vector<NamedConfig> list{{"GC", make(Scheme::GC, 12, 3, 1)},
                                  {"GC-MMC-2", make(Scheme::GC_MMC_Uncorrelated, 12, 3, 2, 0, {3, 2, 1})}};
    for (auto& e : list) {
      e.config.iterations = 2000;
      e.config.seed = 606;
    }
    std::ostringstream os;
    write_trials_csv(os, compare_schemes(list, ExperimentOptions{.run = {}, .threads = threads}));
    return os.str();
  };
  const auto a = render(1);
  const auto b = render(1);
  const auto c = render(3);
  std::ostringstream os;
  os << a.size() << " bytes, repeat " << (a == b ? "identical" : "differs") << ", 3 threads "
     << (a == c ? "identical" : "differs");
  return {a == b && a == c, os.str()};
}

Outcome dgd_trajectory() {
  const auto problem = make_regression_problem(12, 8, 6, 707);
  const double lr = 0.05;
  const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(problem.dim());
  double worst = 0.0;
  bool ok = true;
  std::ostringstream os;
  for (const auto& cfg : {make(Scheme::GC, 12, 3, 1), make(Scheme::GC_MMC_Uncorrelated, 12, 3, 2, 0, {3, 2, 1})}) {
    const auto inst = build_scheme(cfg);
    Rng rng(808);
    const auto trace = run_dgd(problem, inst, 50, lr, theta0, rng);
    Eigen::VectorXd theta = theta0;
    for (int step = 1; step <= 50; ++step) {
      theta -= lr * 2.0 * problem.X.transpose() * (problem.X * theta - problem.y) /
               static_cast<double>(problem.X.rows());
      const auto& coded = trace.trajectory[static_cast<std::size_t>(step)];
      const double rel = (coded - theta).norm() / std::max(theta.norm(), 1e-300);
      worst = std::max(worst, rel);
    }
    ok = ok && trace.trajectory.size() == 51;
  }
  os << "GC and GC-MMC-2, 50 steps, worst per-step relative error " << worst;
  return {ok && worst < 1e-7, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"decoding identity", decoding_identity},
      {"threshold certificates", threshold_certificates},
      {"straggler tolerance", straggler_tolerance},
      {"runtime model", runtime_model},
      {"GC mean completion", gc_mean},
      {"ordering", ordering},
      {"GC-MMC-2 comm_load", mmc2_comm_load},
      {"hybrid dominance", hybrid_dominance},
      {"determinism", determinism},
      {"DGD trajectory", dgd_trajectory},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += out.pass ? 0 : 1;
    std::printf("[%s] criterion %zu: %s -- %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
