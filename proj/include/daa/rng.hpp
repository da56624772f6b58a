#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace daa {

/// splitmix64 stream. Every random draw in the toolkit goes through this
/// generator so corpora, fragment offsets and verdicts are reproducible
/// from the recorded seeds on any platform.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound). bound must be nonzero.
    constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
    }

    /// Uniform value in [lo, hi], both ends included.
    constexpr std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) noexcept {
        return lo + next_below(hi - lo + 1);
    }

    constexpr std::uint8_t next_byte() noexcept {
        return static_cast<std::uint8_t>(next() & 0xff);
    }

    /// Fills out with uniform bytes, 8 per draw, little-endian unpacking.
    constexpr void fill(std::span<std::uint8_t> out) noexcept {
        std::size_t i = 0;
        for (; i + 8 <= out.size(); i += 8) {
            const std::uint64_t v = next();
            for (int b = 0; b < 8; ++b)
                out[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
        }
        for (; i < out.size(); ++i) out[i] = next_byte();
    }

private:
    std::uint64_t state_;
};

/// Folds two 64-bit values into one seed (per-file streams derive from a
/// global seed plus a file key).
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    SplitMix64 rng(a ^ (b + 0x9e3779b97f4a7c15ULL));
    return rng.next();
}

/// FNV-1a hash, used as the stable file key for per-file random streams.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace daa
