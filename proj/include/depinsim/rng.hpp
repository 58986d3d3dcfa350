#pragma once

// Deterministic simulation RNG. splitmix64 core with hand-rolled
// distributions so a (scenario, seed) pair replays to the same event
// stream regardless of standard-library implementation details.

#include <cmath>
#include <cstdint>

namespace depinsim {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound). bound == 0 yields 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return unit() < p; }

    // Box-Muller draw; the sibling variate is discarded to keep the
    // stream position a pure function of the draw count.
    double normal(double mean, double std) {
        const double u1 =
            (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        return mean + std * radius * std::cos(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace depinsim
