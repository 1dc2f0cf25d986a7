#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace banditlab {

// SplitMix64 step, used for seed derivation and stream splitting.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded generator with a portable uniform(0,1) mapping: 53 random bits
// offset by 1/2, so results never hit 0 or 1 and are identical across
// platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Derives an independent stream id from a list of components
    // (e.g. {master_seed, config_hash, seed, substream}).
    static std::uint64_t derive(std::initializer_list<std::uint64_t> parts) {
        std::uint64_t h = 0x8c62fca9e4bd97b5ULL;
        for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
        return h;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace banditlab
