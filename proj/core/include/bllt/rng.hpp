#pragma once

#include <cstdint>

namespace bllt {

/// The one random number generator used anywhere in this library: splitmix64
/// (Steele, Lea, Flood 2014). It is tiny, fast, seedable, and its finalizer
/// doubles as a counter-based hash, which keeps every stochastic feature
/// reproducible and parallelizable:
///
///   * environment generation hashes (seed, site) so a site's draw does not
///     depend on the requested window;
///   * Monte Carlo trajectory i runs on its own stream derived from
///     (seed, i), so results are independent of batching order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Avalanching finalizer; also used standalone as a 64-bit mixer.
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Stateless per-site hash used by environment generation: combines the seed
/// and the (signed) site index through two finalizer rounds.
inline std::uint64_t site_hash(std::uint64_t seed, long long site) {
    const std::uint64_t a = SplitMix64::mix(seed + 0x9e3779b97f4a7c15ULL);
    const std::uint64_t b =
        SplitMix64::mix(static_cast<std::uint64_t>(site) + 0xd1b54a32d192ed03ULL);
    return SplitMix64::mix(a ^ (b + 0x2545f4914f6cdd1dULL));
}

/// Uniform double in [0, 1) from a hash value.
inline double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seed for the RNG stream of worker/trajectory `index` under a master seed.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64::mix(seed ^ SplitMix64::mix(index + 0x9e3779b97f4a7c15ULL));
}

} // namespace bllt
