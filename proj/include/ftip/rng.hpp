#pragma once

// Counter-based generator: the stream is a pure function of
// (seed, trial, stream), so independent trials can run in parallel and in
// any order while producing identical draws. Mixing is SplitMix64.

#include <cstdint>
#include <limits>

namespace ftip {

class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
        state_ = mix(mix(mix(seed) ^ trial) ^ stream);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0,1) using the top 53 bits.
    double uniform() {
        return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace ftip
