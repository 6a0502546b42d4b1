// random.hpp
// Counter-based 64-bit generator.
//
// The i-th output (i = 1, 2, ...) of stream s under seed k is
//
//     mix(key + i * 0x9E3779B97F4A7C15)
//     key = mix(mix(k) ^ (s * 0xD1B54A32D192ED03 + 0x8CB92BA72F3D8DD7))
//
// where mix is the SplitMix64 finalizer. A stream is addressed by its index,
// so independent work items (one per simulated experiment) draw from
// disjoint substreams regardless of evaluation order.

#pragma once

#include <cstdint>
#include <limits>

namespace rspbench {

class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(++counter_); }

    /// Output number i of this stream, independent of the current position.
    result_type at(std::uint64_t i) const { return mix(key_ + i * 0x9E3779B97F4A7C15ull); }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t position() const noexcept { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace rspbench
