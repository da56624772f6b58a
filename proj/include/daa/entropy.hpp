#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "daa/rng.hpp"

namespace daa {

/// Subfragment growth step: curves are sampled every 8 bytes.
inline constexpr std::size_t kCurveStep = 8;
/// Largest fragment a curve is computed over.
inline constexpr std::size_t kMaxFragmentLength = 256;
/// Upper bound of byte entropy in bits per byte.
inline constexpr double kMaxEntropyBits = 8.0;

namespace detail {

/// k * log2(k) for histogram counts up to kMaxFragmentLength.
inline const std::array<double, kMaxFragmentLength + 1>& count_log_table() {
    static const auto table = [] {
        std::array<double, kMaxFragmentLength + 1> t{};
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k)
            t[k] = static_cast<double>(k) * std::log2(static_cast<double>(k));
        return t;
    }();
    return table;
}

[[noreturn]] inline void throw_out_of_bounds(const char* where, std::size_t offset,
                                             std::size_t length, std::size_t size) {
    throw std::out_of_range(std::string(where) + ": offset " + std::to_string(offset) +
                            " + length " + std::to_string(length) + " exceeds buffer size " +
                            std::to_string(size));
}

}  // namespace detail

/// Shannon entropy, in bits per byte, of buffer[offset, offset + length).
inline double byte_entropy(std::span<const std::uint8_t> buffer, std::size_t offset,
                           std::size_t length) {
    if (length == 0)
        throw std::invalid_argument("byte_entropy: length must be at least 1");
    if (offset > buffer.size() || length > buffer.size() - offset)
        detail::throw_out_of_bounds("byte_entropy", offset, length, buffer.size());

    std::array<std::uint64_t, 256> hist{};
    for (std::size_t i = offset; i < offset + length; ++i) ++hist[buffer[i]];

    const double n = static_cast<double>(length);
    double h = 0.0;
    for (std::uint64_t c : hist) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return std::clamp(h, 0.0, kMaxEntropyBits);
}

struct CurvePoint {
    std::size_t length;  // subfragment length in bytes (the x axis)
    double entropy;      // bits per byte (the y axis)
};

/// Entropy of the 8, 16, ..., L byte prefixes of one fragment.
struct EntropyCurve {
    std::vector<CurvePoint> points;

    std::size_t length() const { return points.empty() ? 0 : points.back().length; }

    /// Curve restricted to subfragment lengths <= max_length.
    EntropyCurve prefix(std::size_t max_length) const {
        EntropyCurve out;
        for (const CurvePoint& p : points) {
            if (p.length > max_length) break;
            out.points.push_back(p);
        }
        return out;
    }
};

/// Entropy curve of buffer[offset, offset + fragment_length), one point per
/// 8-byte increment. The byte histogram is extended step by step, so the
/// whole curve is a single pass over the fragment.
inline EntropyCurve entropy_curve(std::span<const std::uint8_t> buffer, std::size_t offset,
                                  std::size_t fragment_length) {
    if (fragment_length == 0 || fragment_length % kCurveStep != 0)
        throw std::invalid_argument("entropy_curve: fragment length " +
                                    std::to_string(fragment_length) +
                                    " is not a positive multiple of 8");
    if (fragment_length > kMaxFragmentLength)
        throw std::invalid_argument("entropy_curve: fragment length " +
                                    std::to_string(fragment_length) + " exceeds " +
                                    std::to_string(kMaxFragmentLength));
    if (offset > buffer.size() || fragment_length > buffer.size() - offset)
        detail::throw_out_of_bounds("entropy_curve", offset, fragment_length, buffer.size());

    const auto& klogk = detail::count_log_table();
    std::array<std::uint16_t, 256> hist{};
    double count_log_sum = 0.0;  // running sum of c * log2(c) over the histogram
    std::size_t distinct = 0;

    EntropyCurve curve;
    curve.points.reserve(fragment_length / kCurveStep);
    for (std::size_t n = kCurveStep; n <= fragment_length; n += kCurveStep) {
        for (std::size_t i = n - kCurveStep; i < n; ++i) {
            const std::uint16_t c = hist[buffer[offset + i]]++;
            if (c == 0) ++distinct;
            count_log_sum += klogk[c + 1] - klogk[c];
        }
        // H = log2(n) - (sum of c*log2(c)) / n; a lone symbol is exactly 0.
        const double h =
            distinct == 1 ? 0.0 : (klogk[n] - count_log_sum) / static_cast<double>(n);
        curve.points.push_back({n, std::clamp(h, 0.0, kMaxEntropyBits)});
    }
    return curve;
}

/// Composite trapezoid rule over uniformly spaced samples:
/// (step / 2) * [f(a) + 2 * sum of interior values + f(b)].
inline double trapezoid_area(std::span<const CurvePoint> samples, std::size_t step) {
    if (samples.size() < 2)
        throw std::invalid_argument("trapezoid_area: need at least 2 samples");
    if (step == 0)
        throw std::invalid_argument("trapezoid_area: step must be nonzero");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].length != samples[i - 1].length + step)
            throw std::invalid_argument("trapezoid_area: samples not uniformly spaced by " +
                                        std::to_string(step));
    }
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) interior += samples[i].entropy;
    return static_cast<double>(step) / 2.0 *
           (samples.front().entropy + 2.0 * interior + samples.back().entropy);
}

/// Signed area between a reference curve and a file curve, in Bit-Bytes
/// (entropy in bits integrated over fragment length in bytes).
struct DifferentialArea {
    double value;
    std::size_t length;  // integration ran over subfragment lengths [8, length]
};

/// Area between the two curves, integrating reference minus file pointwise.
/// The value is signed: a file curve above the reference yields a negative
/// contribution, and thresholds are compared against the raw value.
inline DifferentialArea differential_area(const EntropyCurve& reference,
                                          const EntropyCurve& file_curve) {
    if (reference.points.size() != file_curve.points.size())
        throw std::invalid_argument("differential_area: curves have " +
                                    std::to_string(reference.points.size()) + " and " +
                                    std::to_string(file_curve.points.size()) + " points");
    if (reference.points.empty())
        throw std::invalid_argument("differential_area: empty curves");
    for (std::size_t i = 0; i < reference.points.size(); ++i) {
        if (reference.points[i].length != file_curve.points[i].length)
            throw std::invalid_argument("differential_area: curve steps do not line up");
    }
    if (reference.points.size() == 1)
        return {0.0, reference.length()};  // zero-width integration window

    std::vector<CurvePoint> diff;
    diff.reserve(reference.points.size());
    for (std::size_t i = 0; i < reference.points.size(); ++i)
        diff.push_back({reference.points[i].length,
                        reference.points[i].entropy - file_curve.points[i].entropy});
    return {trapezoid_area(diff, kCurveStep), reference.length()};
}

/// The 256-byte pseudo-random fragment every file curve is differenced
/// against. Generated once per run from a seed and shared across files;
/// the same seed always reproduces the same bytes and curve.
struct ReferenceFragment {
    std::array<std::uint8_t, kMaxFragmentLength> bytes{};
    std::uint64_t seed = 0;
    EntropyCurve curve;  // precomputed over the full 256 bytes

    static ReferenceFragment generate(std::uint64_t seed) {
        ReferenceFragment ref;
        ref.seed = seed;
        SplitMix64 rng(seed);
        rng.fill(ref.bytes);
        ref.curve = entropy_curve(ref.bytes, 0, kMaxFragmentLength);
        return ref;
    }
};

}  // namespace daa
