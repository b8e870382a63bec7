#pragma once

#include <cstdint>
#include <vector>

namespace mcmin {

/// SplitMix64: a tiny, fully specified, portable 64-bit generator
/// (Steele/Lea/Flood mixing constants). All randomised operations in the
/// library derive their streams from it so results are identical across
/// platforms for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::uint64_t state_;
};

/// Stream-splitting rule: substream `idx` of `seed` starts from the SplitMix64
/// output of `seed XOR (golden * (idx + 1))`. Per-state sampling, per-state
/// perturbation and per-iteration shuffles each use their own substream, so
/// results are independent of evaluation order and thread scheduling.
inline SplitMix64 split_stream(std::uint64_t seed, std::uint64_t idx) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
    return SplitMix64(mixer.next());
}

/// Fisher-Yates shuffle driven by SplitMix64 (std::shuffle is not portable).
template <typename T>
void portable_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace mcmin
