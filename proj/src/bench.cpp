#include "depinsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace depinsim {

std::vector<std::uint64_t> sieve_primes(std::uint64_t max) {
    std::vector<std::uint64_t> primes;
    if (max < 2) return primes;
    std::vector<std::uint8_t> sieve(max + 1, 0);
    for (std::uint64_t i = 2; i <= max; ++i) {
        if (!sieve[i]) {
            primes.push_back(i);
            for (std::uint64_t j = i * 2; j <= max; j += i) {
                sieve[j] = 1;
            }
        }
    }
    return primes;
}

SampleSet run_benchmark(std::uint64_t workload_param, std::uint32_t iterations,
                        std::uint32_t warmup, const std::string& platform) {
    using clock = std::chrono::steady_clock;
    for (std::uint32_t i = 0; i < warmup; ++i) {
        volatile auto discard = sieve_primes(workload_param).size();
        (void)discard;
    }
    SampleSet set;
    set.platform = platform;
    set.workload_param = workload_param;
    set.samples_ms.reserve(iterations);
    std::size_t expected_count = 0;
    for (std::uint32_t i = 0; i < iterations; ++i) {
        const auto t0 = clock::now();
        const auto primes = sieve_primes(workload_param);
        const auto t1 = clock::now();
        if (i == 0) {
            expected_count = primes.size();
        } else if (primes.size() != expected_count) {
            throw std::logic_error("benchmark runs disagree on prime count");
        }
        const auto ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
        set.samples_ms.push_back(static_cast<double>(ns.count()) / 1e6);
    }
    return set;
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double percentile) {
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

}  // namespace

Result<PlatformStats, BenchError> stats(const SampleSet& set) {
    using R = Result<PlatformStats, BenchError>;
    if (set.samples_ms.empty()) {
        return R::fail(BenchError::EmptySampleSet);
    }
    std::vector<double> sorted = set.samples_ms;
    std::sort(sorted.begin(), sorted.end());

    double sum = 0;
    for (double v : sorted) sum += v;
    const double mean = sum / static_cast<double>(sorted.size());
    double sq = 0;
    for (double v : sorted) sq += (v - mean) * (v - mean);
    const double variance = sq / static_cast<double>(sorted.size());

    PlatformStats out;
    out.platform = set.platform;
    out.mean_ms = mean;
    out.std_ms = std::sqrt(variance);
    out.min_ms = sorted.front();
    out.max_ms = sorted.back();
    out.p50_ms = nearest_rank(sorted, 50.0);
    out.p95_ms = nearest_rank(sorted, 95.0);
    return R::ok(out);
}

Result<CompareResult, BenchError> compare(std::vector<PlatformStats> stats_list) {
    using R = Result<CompareResult, BenchError>;
    if (stats_list.size() < 2) {
        return R::fail(BenchError::TooFewPlatforms);
    }
    CompareResult result;
    result.ranking = std::move(stats_list);
    std::stable_sort(result.ranking.begin(), result.ranking.end(),
                     [](const PlatformStats& a, const PlatformStats& b) {
                         return a.mean_ms < b.mean_ms;
                     });
    const auto n = result.ranking.size();
    result.delta_pct.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double base = result.ranking[i].mean_ms;
            result.delta_pct[i][j] =
                (result.ranking[j].mean_ms - base) / base * 100.0;
        }
    }
    return R::ok(result);
}

double per_core_watts(double tdp_watts, std::uint32_t cores) {
    return tdp_watts / static_cast<double>(cores);
}

double energy_wh(double power_watts, double duration_ms) {
    return power_watts * duration_ms / 3'600'000.0;
}

double energy_wh(const PowerModel& model) {
    return energy_wh(model.power_watts, model.duration_ms);
}

std::uint64_t executions_per_wh(double energy_wh_per_run) {
    if (energy_wh_per_run <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::floor(1.0 / energy_wh_per_run));
}

}  // namespace depinsim
