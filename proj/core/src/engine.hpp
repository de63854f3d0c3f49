#pragma once

// Internal Monte Carlo path engines. Compiled in paths.cpp with vectorized
// math; everything here is deterministic in (seed, paths, n_steps) and
// independent of the worker count.

#include <cstdint>
#include <vector>

namespace shc::engine {

struct SupSamples {
    std::vector<double> stable_sup;       // skeleton max of W at subordinator times
    std::vector<double> subordinate_sup;  // bridge-corrected max over all Brownian time
    std::vector<double> endpoint;         // final skeleton value
};

SupSamples sample_sup(double alpha, double horizon, long long n_steps, long long paths,
                      std::uint64_t seed, int threads, bool want_bridge);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long n = 0;
};

// Mean of the skeleton supremum at full and half grid resolution (shared
// randomness), at operational time 1.
struct SkeletonMean {
    MeanStderr full;
    double half_mean = 0.0;
};
SkeletonMean skeleton_sup_mean(double alpha, long long n_steps, long long paths,
                               std::uint64_t seed, int threads);

MeanStderr bridged_sup_mean(double alpha, double horizon, long long n_steps,
                            long long paths, std::uint64_t seed, int threads);

MeanStderr bridged_sup_survival(double alpha, double horizon, double threshold,
                                long long n_steps, long long paths, std::uint64_t seed,
                                int threads);

// Plain Brownian motion on [0, total_time], n equal segments, bridge maxima.
MeanStderr brownian_bridged_sup_survival(double total_time, double threshold,
                                         long long n_steps, long long paths,
                                         std::uint64_t seed, int threads);

struct IntervalOptions {
    bool want_ks = false;        // skeleton-only survival (jump process at grid times)
    bool want_sk = false;        // bridge-corrected continuum survival
    bool want_cross_ks = false;  // both barriers crossed by the skeleton
    bool want_cross_sk = false;  // both barriers crossed by the continuum path
};

struct IntervalResult {
    // survival probabilities averaged over stratified antithetic starts
    MeanStderr ks;
    double ks_half_mean = 0.0;  // same paths, half-resolution grid
    MeanStderr sk;
    MeanStderr cross_ks;
    MeanStderr cross_sk;
    long long order_violations = 0;  // sk indicator exceeded ks indicator (never)
    long long strict_gap = 0;        // ks alive but sk dead (inclusion strictness)
    long long paths = 0;
};

IntervalResult interval_mc(double alpha, double a, double b, double t, long long n_steps,
                           long long paths, int x_strata, std::uint64_t seed, int threads,
                           const IntervalOptions& opt);

} // namespace shc::engine
