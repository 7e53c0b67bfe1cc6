#pragma once

#include <cstdint>
#include <random>

namespace comp_isac {

/**
 * @brief Seeded pseudo-random stream with counter-derived substreams.
 *
 * Substream (seed, counter) depends only on its two arguments, so Monte Carlo
 * trial t or multi-start branch k draws the same numbers no matter which
 * thread runs it or in what order.
 */
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed);

    /// Independent stream for (seed, counter).
    static RandomStream substream(std::uint64_t seed, std::uint64_t counter);

    engine_type& engine() noexcept { return engine_; }

    double uniform();                 ///< U[0, 1)
    double uniform_open_closed();     ///< U(0, 1]
    double normal();                  ///< N(0, 1)
    double exponential(double mean);  ///< Exp with the given mean; 0 when mean == 0
    std::uint64_t bits() { return engine_(); }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to decorrelate nearby seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace comp_isac
