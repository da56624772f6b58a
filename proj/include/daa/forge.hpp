#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "daa/entropy.hpp"
#include "daa/rng.hpp"

namespace daa {

/// The three header-manipulation attacks that defeat single-fragment
/// differential area analysis.
enum class AttackKind { low_h, rep_bytes, com_seq };

/// Filename suffix recorded on forged corpus files.
inline const char* attack_suffix(AttackKind kind) {
    switch (kind) {
        case AttackKind::low_h: return "low-H";
        case AttackKind::rep_bytes: return "rep-bytes";
        case AttackKind::com_seq: return "com-seq";
    }
    return "?";
}

struct AttackSpec {
    AttackKind kind = AttackKind::low_h;
    std::uint64_t seed = 0;  // com_seq sequence ordering; unused by the other two
};

/// Low-entropy sequence injection used by the stress tests: after every
/// jump_length original bytes, injection_length copies of one random byte
/// are inserted, until end of file.
struct StressSpec {
    std::size_t injection_length = 0;  // n: even, in [0, 64]
    std::size_t jump_length = 4;       // m: multiple of 4, in [4, 64]
    std::uint64_t seed = 0;            // picks the injected byte

    void validate() const {
        if (injection_length % 2 != 0 || injection_length > 64)
            throw std::invalid_argument("StressSpec: injection length " +
                                        std::to_string(injection_length) +
                                        " must be even and at most 64");
        if (jump_length < 4 || jump_length > 64 || jump_length % 4 != 0)
            throw std::invalid_argument("StressSpec: jump length " +
                                        std::to_string(jump_length) +
                                        " must be a multiple of 4 in [4, 64]");
    }
};

/// Prepends a 256-byte run of 'a'. Output size is input size + 256 and the
/// original payload survives unmodified as the suffix.
inline std::vector<std::uint8_t> forge_low_h(std::span<const std::uint8_t> file) {
    std::vector<std::uint8_t> out;
    out.reserve(file.size() + kMaxFragmentLength);
    out.assign(kMaxFragmentLength, static_cast<std::uint8_t>('a'));
    out.insert(out.end(), file.begin(), file.end());
    return out;
}

/// Tiles the first 8 bytes 32 times over the 256-byte header. The tiled
/// block replaces file[0, 256); a file shorter than 256 bytes becomes
/// exactly the 256-byte tiled block.
inline std::vector<std::uint8_t> forge_rep_bytes(std::span<const std::uint8_t> file) {
    if (file.size() < kCurveStep)
        throw std::invalid_argument("forge_rep_bytes: file has " + std::to_string(file.size()) +
                                    " bytes, need at least 8");
    std::vector<std::uint8_t> out(std::max(file.size(), kMaxFragmentLength));
    for (std::size_t i = 0; i < kMaxFragmentLength; ++i) out[i] = file[i % kCurveStep];
    if (file.size() > kMaxFragmentLength)
        std::copy(file.begin() + kMaxFragmentLength, file.end(),
                  out.begin() + kMaxFragmentLength);
    return out;
}

/// The fixed sequence pool the com-seq attack draws from: both alphabets,
/// the decimal numbers 0 through 22, a run of zero digits, and a handful of
/// common words. A fixed pool keeps forged corpora reproducible.
inline constexpr std::array<std::string_view, 11> kComSeqPool = {
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    "abcdefghijklmnopqrstuvwxyz",
    "012345678910111213141516171819202122",
    "00000000000000000000000000000000",
    "password",
    "the",
    "and",
    "hello",
    "world",
    "file",
    "data",
};

/// Replaces the 256-byte header with a seeded succession of low-entropy
/// sequences. The two alphabets lead (in seeded order), which keeps the
/// first subfragments as byte-diverse as a random fragment; the rest of
/// the header is a seeded succession of pool items, truncated at 256.
inline std::vector<std::uint8_t> forge_com_seq(std::span<const std::uint8_t> file,
                                               std::uint64_t seed) {
    if (file.size() < kMaxFragmentLength)
        throw std::invalid_argument("forge_com_seq: file has " + std::to_string(file.size()) +
                                    " bytes, need at least 256");
    std::vector<std::uint8_t> out(file.begin(), file.end());

    SplitMix64 rng(seed);
    std::string header;
    header.reserve(kMaxFragmentLength + 36);
    const bool upper_first = rng.next_below(2) == 0;
    header.append(kComSeqPool[upper_first ? 0 : 1]);
    header.append(kComSeqPool[upper_first ? 1 : 0]);
    while (header.size() < kMaxFragmentLength)
        header.append(kComSeqPool[rng.next_below(kComSeqPool.size())]);

    for (std::size_t i = 0; i < kMaxFragmentLength; ++i)
        out[i] = static_cast<std::uint8_t>(header[i]);
    return out;
}

inline std::vector<std::uint8_t> apply_attack(std::span<const std::uint8_t> file,
                                              const AttackSpec& spec) {
    switch (spec.kind) {
        case AttackKind::low_h: return forge_low_h(file);
        case AttackKind::rep_bytes: return forge_rep_bytes(file);
        case AttackKind::com_seq: return forge_com_seq(file, spec.seed);
    }
    throw std::invalid_argument("apply_attack: unknown attack kind");
}

/// Inserts injection_length copies of one seeded random byte after every
/// jump_length original bytes. Output size is exactly
/// input + n * floor(input / m); n = 0 is the identity.
inline std::vector<std::uint8_t> stress_inject(std::span<const std::uint8_t> file,
                                               const StressSpec& spec) {
    spec.validate();
    if (spec.injection_length == 0) return {file.begin(), file.end()};

    SplitMix64 rng(spec.seed);
    const std::uint8_t filler = rng.next_byte();  // one draw per file
    const std::size_t chunks = file.size() / spec.jump_length;

    std::vector<std::uint8_t> out;
    out.reserve(file.size() + spec.injection_length * chunks);
    std::size_t pos = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.insert(out.end(), file.begin() + pos, file.begin() + pos + spec.jump_length);
        out.insert(out.end(), spec.injection_length, filler);
        pos += spec.jump_length;
    }
    out.insert(out.end(), file.begin() + pos, file.end());
    return out;
}

}  // namespace daa
