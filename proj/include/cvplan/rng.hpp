#pragma once

#include <cstdint>

namespace cvplan {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-mode SplitMix64: draw i of a stream with key k is
// mix64(k + i * golden gamma), i.e. SplitMix64 seeded at k, evaluated by
// counter. Streams are split by chaining the finalizer over
// (seed, rep, substream), so reps and splits can be evaluated in any order
// or in parallel with bit-identical output.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng stream(std::uint64_t seed, std::uint64_t rep,
                             std::uint64_t substream) {
        return CounterRng(mix64(mix64(mix64(seed + kGamma) + rep) + substream));
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0,1); safe for inverse-CDF transforms.
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) by rejection-free 128-bit scaling.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace cvplan
