#pragma once

#include <cstdint>
#include <random>

#include "gcmmc/model.hpp"

namespace gcmmc {

using Rng = std::mt19937_64;

/// Shifted-exponential scaling model: one draw X ~ Exp(mu) per worker per
/// iteration, finish[s-1] = s * (alpha + X).
WorkerTimeline timeline_from_draw(double alpha, int r, double exponential_draw);

WorkerTimeline sample_timeline(double mu, double alpha, int r, Rng& rng);

IterationTimelines sample_iteration(double mu, double alpha, int r, int K, Rng& rng);

/// Pr[T[s] <= t] for the s-th computation.
double completion_cdf(double mu, double alpha, int s, double t);

/// Independent stream seed for one trial of an experiment.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

}  // namespace gcmmc
