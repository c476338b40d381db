#include "gcmmc/runtime.hpp"

#include <cmath>

namespace gcmmc {

namespace {

void check_parameters(double mu, double alpha, int r) {
  if (!(mu > 0.0) || !(alpha > 0.0) || r < 1) {
    throw ConfigError("runtime model needs mu > 0, alpha > 0, r >= 1");
  }
}

}  // namespace

WorkerTimeline timeline_from_draw(double alpha, int r, double exponential_draw) {
  WorkerTimeline t;
  t.finish.resize(static_cast<std::size_t>(r));
  const double unit = alpha + exponential_draw;
  for (int s = 1; s <= r; ++s) t.finish[static_cast<std::size_t>(s - 1)] = s * unit;
  return t;
}

WorkerTimeline sample_timeline(double mu, double alpha, int r, Rng& rng) {
  check_parameters(mu, alpha, r);
  std::exponential_distribution<double> exp(mu);
  return timeline_from_draw(alpha, r, exp(rng));
}

IterationTimelines sample_iteration(double mu, double alpha, int r, int K, Rng& rng) {
  check_parameters(mu, alpha, r);
  IterationTimelines out;
  out.reserve(static_cast<std::size_t>(K));
  for (int w = 0; w < K; ++w) out.push_back(sample_timeline(mu, alpha, r, rng));
  return out;
}

double completion_cdf(double mu, double alpha, int s, double t) {
  if (t < s * alpha) return 0.0;
  return 1.0 - std::exp(-mu * (t / s - alpha));
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  // splitmix64 finalizer over (seed, trial)
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace gcmmc
