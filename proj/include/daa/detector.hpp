#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "daa/entropy.hpp"
#include "daa/rng.hpp"

namespace daa {

/// What a verdict fell back to when the file could not support the full
/// fragment budget.
enum class Fallback {
    none,         // full analysis ran
    header_only,  // file too small for the extra fragments, header decided alone
    too_small,    // under 8 bytes, unclassifiable
};

inline const char* to_string(Fallback f) {
    switch (f) {
        case Fallback::none: return "none";
        case Fallback::header_only: return "header-only";
        case Fallback::too_small: return "too-small";
    }
    return "?";
}

/// Knobs shared by the single-fragment detector and the N-fragment family.
struct DetectorParams {
    std::size_t fragment_length = 48;  // o: bytes analysed per fragment, multiple of 8 in [8, 256]
    double threshold = 14.0;           // t: Bit-Bytes below which a file counts as encrypted
    double distance = 56.0;            // d: header bias; ignored when fragments == 1
    int fragments = 4;                 // N: 1 = header only, 2/3/4 = 2F/3F/4F
    std::uint64_t seed = 0;            // reference fragment and per-file offset streams

    void validate() const {
        if (fragment_length < kCurveStep || fragment_length > kMaxFragmentLength ||
            fragment_length % kCurveStep != 0)
            throw std::invalid_argument("DetectorParams: fragment length " +
                                        std::to_string(fragment_length) +
                                        " must be a multiple of 8 in [8, 256]");
        if (threshold < 0.0)
            throw std::invalid_argument("DetectorParams: threshold must be >= 0");
        if (distance < 0.0)
            throw std::invalid_argument("DetectorParams: distance must be >= 0");
        if (fragments < 1)
            throw std::invalid_argument("DetectorParams: fragment count must be >= 1");
    }

    /// Best attack-corpus parameters per detector; these are the documented
    /// defaults everywhere a detector is picked by fragment count alone.
    static DetectorParams defaults_for(int fragments, std::uint64_t seed = 0) {
        DetectorParams p;
        p.fragments = fragments;
        p.seed = seed;
        switch (fragments) {
            case 1: p.fragment_length = 152; p.threshold = 40.0; p.distance = 0.0; break;
            case 2: p.fragment_length = 48; p.threshold = 12.0; p.distance = 54.0; break;
            case 3: p.fragment_length = 48; p.threshold = 10.0; p.distance = 48.0; break;
            default: p.fragment_length = 48; p.threshold = 14.0; p.distance = 56.0; break;
        }
        return p;
    }
};

inline std::string detector_name(int fragments) {
    switch (fragments) {
        case 1: return "DAA";
        case 2: return "2F";
        case 3: return "3F";
        case 4: return "4F";
        default: return std::to_string(fragments) + "F";
    }
}

struct FragmentArea {
    std::size_t start_offset;
    double area;  // Bit-Bytes against the reference curve
};

struct Verdict {
    bool encrypted = false;
    /// The area the threshold was compared against. Stays +inf for
    /// too-small files so `encrypted == (selected_area < threshold)` holds
    /// on every verdict.
    double selected_area = std::numeric_limits<double>::infinity();
    std::vector<FragmentArea> fragment_areas;  // header first, then extra fragments
    DetectorParams params_used;
    Fallback fallback = Fallback::none;
};

/// Area selection rule of the N-fragment detectors: the header area wins
/// when the competing area lies within `distance` below it, otherwise the
/// smaller of the two wins. Never fabricates a third value.
inline double select_area(double header_area, double other_area, double distance) {
    if (header_area > other_area && header_area - distance < other_area) return header_area;
    return std::min(header_area, other_area);
}

namespace detail {

inline std::size_t usable_length(std::size_t requested, std::size_t available) {
    return std::min(requested, available - available % kCurveStep);
}

inline double fragment_area(std::span<const std::uint8_t> data, std::size_t offset,
                            std::size_t length, const ReferenceFragment& reference) {
    const EntropyCurve file_curve = entropy_curve(data, offset, length);
    return differential_area(reference.curve.prefix(length), file_curve).value;
}

/// Header-only classification, shared by the single-fragment detector and
/// the small-file fallback of the N-fragment detectors.
inline Verdict header_verdict(std::span<const std::uint8_t> data, const DetectorParams& params,
                              const ReferenceFragment& reference, Fallback fallback) {
    Verdict v;
    v.params_used = params;
    if (data.size() < kCurveStep) {
        v.fallback = Fallback::too_small;
        return v;
    }
    v.fallback = fallback;
    const std::size_t length = usable_length(params.fragment_length, data.size());
    const double area = fragment_area(data, 0, length, reference);
    v.fragment_areas.push_back({0, area});
    v.selected_area = area;
    v.encrypted = area < params.threshold;
    return v;
}

}  // namespace detail

/// Differential area analysis over the file header: the header entropy
/// curve is differenced against the reference curve and the file counts as
/// encrypted when the area falls below the threshold. Files shorter than
/// the fragment length are analysed over their largest 8-multiple prefix;
/// files under 8 bytes come back with fallback = too_small.
inline Verdict classify_daa(std::span<const std::uint8_t> data, const DetectorParams& params,
                            const ReferenceFragment& reference) {
    params.validate();
    if (params.fragments != 1)
        throw std::invalid_argument("classify_daa: params request " +
                                    std::to_string(params.fragments) + " fragments");
    return detail::header_verdict(data, params, reference, Fallback::none);
}

/// N-fragment classification (2F/3F/4F and beyond): the header plus N-1
/// fragments at seeded random offsets. For N == 2 the single extra fragment
/// competes with the header directly; for N >= 3 the file is split into N
/// partitions, one fragment is drawn per partition boundary, and the mean
/// of the non-header areas competes with the header. Offsets derive from
/// (params.seed, file_key), so verdicts are reproducible per file.
inline Verdict classify_nf(std::span<const std::uint8_t> data, const DetectorParams& params,
                           const ReferenceFragment& reference, std::uint64_t file_key = 0) {
    params.validate();
    if (params.fragments < 2)
        throw std::invalid_argument("classify_nf: needs at least 2 fragments");
    if (data.size() < kCurveStep)
        return detail::header_verdict(data, params, reference, Fallback::too_small);

    const std::size_t o = params.fragment_length;
    const std::size_t budget =
        params.fragments == 2 ? 3 * o : static_cast<std::size_t>(params.fragments) * o;
    if (data.size() < budget)
        return detail::header_verdict(data, params, reference, Fallback::header_only);

    SplitMix64 rng(mix_seed(params.seed, file_key));
    Verdict v;
    v.params_used = params;
    const double header = detail::fragment_area(data, 0, o, reference);
    v.fragment_areas.push_back({0, header});

    double competing = 0.0;
    if (params.fragments == 2) {
        const std::size_t start = rng.next_in(o, data.size() - o - 1);
        competing = detail::fragment_area(data, start, o, reference);
        v.fragment_areas.push_back({start, competing});
    } else {
        const std::size_t partition = data.size() / static_cast<std::size_t>(params.fragments);
        double sum = 0.0;
        for (int n = 1; n < params.fragments; ++n) {
            std::size_t start = rng.next_in(static_cast<std::size_t>(n) * partition,
                                            static_cast<std::size_t>(n + 1) * partition);
            start = std::min(start, data.size() - o);  // keep the tail draw in bounds
            const double area = detail::fragment_area(data, start, o, reference);
            v.fragment_areas.push_back({start, area});
            sum += area;
        }
        competing = sum / static_cast<double>(params.fragments - 1);
    }

    v.selected_area = select_area(header, competing, params.distance);
    v.encrypted = v.selected_area < params.threshold;
    return v;
}

/// Dispatch on the configured fragment count.
inline Verdict classify(std::span<const std::uint8_t> data, const DetectorParams& params,
                        const ReferenceFragment& reference, std::uint64_t file_key = 0) {
    return params.fragments == 1 ? classify_daa(data, params, reference)
                                 : classify_nf(data, params, reference, file_key);
}

struct AreaPoint {
    std::size_t length;  // integration upper bound in bytes
    double area;         // differential area over [8, length]
};

/// Running differential areas of one fragment at every incremental step,
/// so a parameter sweep can evaluate every subfragment length from one
/// entropy-curve pass.
struct FragmentAreaCurve {
    std::size_t start_offset = 0;
    std::vector<AreaPoint> points;  // lengths 16, 24, ..., up to what the file allows

    /// Area at the given subfragment length, truncated to what was
    /// available; length 8 integrates a zero-width window and is 0.
    double value_at(std::size_t length) const {
        if (length <= kCurveStep || points.empty()) return 0.0;
        const std::size_t idx =
            std::min((length - 2 * kCurveStep) / kCurveStep, points.size() - 1);
        return points[idx].area;
    }
};

/// Cumulative differential areas for fragments at the given offsets. Each
/// fragment is curved once over min(256, bytes available past the offset)
/// and integrated incrementally.
inline std::vector<FragmentAreaCurve> cumulative_areas(std::span<const std::uint8_t> data,
                                                       const ReferenceFragment& reference,
                                                       std::span<const std::size_t> offsets) {
    std::vector<FragmentAreaCurve> out;
    out.reserve(offsets.size());
    for (std::size_t offset : offsets) {
        if (offset >= data.size() || data.size() - offset < kCurveStep)
            throw std::invalid_argument("cumulative_areas: offset " + std::to_string(offset) +
                                        " leaves no full 8-byte step in " +
                                        std::to_string(data.size()) + " bytes");
        const std::size_t length = detail::usable_length(kMaxFragmentLength, data.size() - offset);
        const EntropyCurve file_curve = entropy_curve(data, offset, length);

        FragmentAreaCurve fc;
        fc.start_offset = offset;
        fc.points.reserve(file_curve.points.size() - 1);
        double area = 0.0;
        for (std::size_t i = 1; i < file_curve.points.size(); ++i) {
            const double lo =
                reference.curve.points[i - 1].entropy - file_curve.points[i - 1].entropy;
            const double hi = reference.curve.points[i].entropy - file_curve.points[i].entropy;
            area += static_cast<double>(kCurveStep) / 2.0 * (lo + hi);
            fc.points.push_back({file_curve.points[i].length, area});
        }
        out.push_back(std::move(fc));
    }
    return out;
}

}  // namespace daa
