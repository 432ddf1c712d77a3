#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace cfota {

// What a random stream is used for. Part of the stream key, so adding a new
// consumer never shifts the draws of an existing one.
enum class Purpose : std::uint32_t {
    Geometry = 1,
    Shadowing = 2,
    SmallScale = 3,
    PilotNoise = 4,
    DataNoise = 5,
    Symbols = 6,
    DataSplit = 7,
    ModelInit = 8,
    InjectedError = 9,
    Dataset = 10,
    Test = 11,
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Satisfies UniformRandomBitGenerator with 32-bit output.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(Key key, Counter counter) : key_(key), counter_(counter) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (index_ == 4) {
            block_ = bijection(counter_, key_);
            increment();
            index_ = 0;
        }
        return block_[index_++];
    }

    /// The raw 10-round bijection; exposed for known-answer tests.
    static Counter bijection(Counter ctr, Key key);

private:
    void increment() {
        for (auto& w : counter_) {
            if (++w != 0) break;
        }
    }

    Key key_;
    Counter counter_;
    Counter block_{};
    int index_ = 4;
};

/// SplitMix64 finalizer, used as the key-mixing function.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream for (seed, round, entity, purpose).
/// key = mix64(seed ^ mix64(purpose)); counter words 2..3 hold entity and round,
/// words 0..1 count blocks within the stream.
inline Philox4x32 make_stream(std::uint64_t seed, std::uint32_t round, std::uint32_t entity,
                              Purpose purpose) {
    const std::uint64_t k = mix64(seed ^ mix64(static_cast<std::uint64_t>(purpose)));
    return Philox4x32({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)},
                      {0u, 0u, entity, round});
}

using Rng = Philox4x32;

inline double standard_normal(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return n(rng);
}

inline double uniform01(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng);
}

/// CN(0, 1): real and imaginary parts i.i.d. N(0, 1/2).
inline std::complex<double> complex_normal(Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

}  // namespace cfota
