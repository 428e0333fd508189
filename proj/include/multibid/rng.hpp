#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace multibid {

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combines a running hash with one more 64-bit word.
inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept
{
    return splitmix_finalize(h + 0x9e3779b97f4a7c15ULL + splitmix_finalize(v));
}

/// FNV-1a; stable across platforms, unlike std::hash.
inline constexpr std::uint64_t hash_string(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// SplitMix64 as a UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix_finalize(state_);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class Channel : std::uint64_t { price = 0, value = 1 };

/// Counter-based randomness for one episode: the draw for (round, platform,
/// channel) depends only on those coordinates and the master seed, so
/// policies that play different numbers of rounds still face the same
/// environment at every (t, i).
class EpisodeRng {
public:
    explicit EpisodeRng(std::uint64_t master_seed) noexcept : master_seed_(master_seed) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }

    SplitMix64 engine(std::uint64_t t, std::uint64_t platform, Channel channel) const noexcept
    {
        std::uint64_t key = hash_combine(splitmix_finalize(master_seed_), t);
        key = hash_combine(key, platform);
        key = hash_combine(key, static_cast<std::uint64_t>(channel));
        return SplitMix64(key);
    }

private:
    std::uint64_t master_seed_;
};

} // namespace multibid
