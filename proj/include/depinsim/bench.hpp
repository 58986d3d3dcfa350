#pragma once

// Measurement harness: the prime-sieve benchmark workload, repeated timed
// execution, distribution statistics, platform ranking, and the
// performance-per-watt arithmetic.

#include <cstdint>
#include <string>
#include <vector>

#include "depinsim/result.hpp"

namespace depinsim {

struct SampleSet {
    std::string platform;
    std::vector<double> samples_ms;  // all > 0
    std::uint64_t workload_param = 0;
};

struct PlatformStats {
    std::string platform;
    double mean_ms = 0;
    double std_ms = 0;  // population standard deviation
    double min_ms = 0;
    double max_ms = 0;
    double p50_ms = 0;  // nearest-rank percentiles
    double p95_ms = 0;
};

struct PowerModel {
    std::string label;
    double power_watts = 0;   // per executing core
    double duration_ms = 0;   // average workload duration
};

enum class BenchError { EmptySampleSet, TooFewPlatforms };

// Sieve of Eratosthenes over [2, max]: walk i upward, collect i while
// unmarked, mark 2i, 3i, ... <= max. Ascending primes; empty for max < 2.
std::vector<std::uint64_t> sieve_primes(std::uint64_t max);

// Times `iterations` sequential runs of sieve_primes(workload_param) after
// `warmup` discarded runs. Every run must produce the same prime count.
SampleSet run_benchmark(std::uint64_t workload_param, std::uint32_t iterations,
                        std::uint32_t warmup = 3,
                        const std::string& platform = "local");

Result<PlatformStats, BenchError> stats(const SampleSet& set);

struct CompareResult {
    // Platforms sorted by ascending mean; ties keep input order.
    std::vector<PlatformStats> ranking;
    // delta_pct[i][j] = (mean(ranking[j]) - mean(ranking[i])) / mean(ranking[i]) * 100
    std::vector<std::vector<double>> delta_pct;
};

Result<CompareResult, BenchError> compare(std::vector<PlatformStats> stats_list);

// tdp_watts spread evenly over the cores.
double per_core_watts(double tdp_watts, std::uint32_t cores);

// Watt-hours consumed by one run: power * duration / 3.6e6.
double energy_wh(double power_watts, double duration_ms);
double energy_wh(const PowerModel& model);

// Whole executions obtainable from one watt-hour.
std::uint64_t executions_per_wh(double energy_wh_per_run);

}  // namespace depinsim
