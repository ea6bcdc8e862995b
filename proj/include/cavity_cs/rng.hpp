#pragma once

#include <cstdint>
#include <random>

namespace cavity_cs {

// SplitMix64 (Steele/Lea/Flood). Used to whiten seeds and to derive
// independent sub-stream seeds from a master seed plus integer tags.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (tag << 1));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

template <typename... Tags>
std::uint64_t derive_stream(std::uint64_t seed, Tags... tags) {
    ((seed = mix_seed(seed, static_cast<std::uint64_t>(tags))), ...);
    return seed;
}

// Deterministic generator wrapper. mt19937_64 has a standardized output
// sequence and the mappings below avoid the implementation-defined
// std::uniform_*_distribution, so identical seeds give identical draws
// on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1) with 53-bit resolution
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased integer in [0, n), rejection sampled
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace cavity_cs
