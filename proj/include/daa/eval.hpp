#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "daa/corpus.hpp"
#include "daa/detector.hpp"
#include "daa/forge.hpp"
#include "daa/io.hpp"

namespace daa {

/// Confusion counts and derived ratios for one scored scan. The positive
/// class is "encrypted". Verdicts that fell back to too_small are excluded
/// from the matrix and counted in `skipped`.
struct MetricsReport {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::uint64_t skipped = 0;
    double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
    bool degenerate = false;  // some ratio hit a 0/0 and was reported as 0

    static MetricsReport from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                                     std::uint64_t fn, std::uint64_t skipped = 0) {
        MetricsReport r;
        r.tp = tp;
        r.fp = fp;
        r.tn = tn;
        r.fn = fn;
        r.skipped = skipped;
        const std::uint64_t total = tp + tn + fp + fn;
        if (total > 0)
            r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
        else
            r.degenerate = true;
        if (tp + fp > 0)
            r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        else
            r.degenerate = true;
        if (tp + fn > 0)
            r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        else
            r.degenerate = true;
        if (r.precision + r.recall > 0.0)
            r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
        else
            r.degenerate = true;
        return r;
    }
};

/// Scores verdicts against ground truth.
inline MetricsReport score(std::span<const std::pair<Verdict, Label>> results) {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0, skipped = 0;
    for (const auto& [verdict, truth] : results) {
        if (verdict.fallback == Fallback::too_small) {
            ++skipped;
            continue;
        }
        const bool positive = truth == Label::encrypted;
        if (verdict.encrypted)
            positive ? ++tp : ++fp;
        else
            positive ? ++fn : ++tn;
    }
    return MetricsReport::from_counts(tp, fp, tn, fn, skipped);
}

/// The parameter grid a sweep walks. Defaults cover the figure ranges:
/// lengths 8..256 step 8, thresholds 2..60 step 2, distances 2..80 step 2.
struct ParamGrid {
    std::vector<std::size_t> lengths;
    std::vector<double> thresholds;
    std::vector<double> distances;

    static ParamGrid defaults() {
        ParamGrid g;
        for (std::size_t l = 8; l <= 256; l += 8) g.lengths.push_back(l);
        for (int t = 2; t <= 60; t += 2) g.thresholds.push_back(t);
        for (int d = 2; d <= 80; d += 2) g.distances.push_back(d);
        return g;
    }
};

struct SweepPoint {
    DetectorParams params;
    MetricsReport metrics;
};

struct SweepResult {
    /// One point per grid coordinate, ordered length-major, then threshold,
    /// then distance.
    std::vector<SweepPoint> points;
    /// Indices of every point tied for best accuracy, in grid order.
    std::vector<std::size_t> best;

    const SweepPoint& best_point() const { return points[best.front()]; }
};

namespace detail {

struct ConfusionCell {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline void parallel_for(std::size_t count, unsigned workers, auto&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i, 0u);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1))
                body(i, w);
        });
    }
    for (auto& t : pool) t.join();
}

/// Fragment start offsets for one file, drawn once per fragment set with
/// the largest grid length as the in-bounds budget. Empty when the file
/// only supports header-only analysis.
inline std::vector<std::size_t> sweep_offsets(std::size_t file_size, int fragments,
                                              std::size_t max_length, SplitMix64& rng) {
    std::vector<std::size_t> offsets;
    if (fragments < 2) return offsets;
    if (fragments == 2) {
        if (file_size < 3 * max_length) return offsets;
        offsets.push_back(rng.next_in(max_length, file_size - max_length - 1));
        return offsets;
    }
    if (file_size < static_cast<std::size_t>(fragments) * max_length) return offsets;
    const std::size_t partition = file_size / static_cast<std::size_t>(fragments);
    for (int n = 1; n < fragments; ++n) {
        std::size_t start = rng.next_in(static_cast<std::size_t>(n) * partition,
                                        static_cast<std::size_t>(n + 1) * partition);
        offsets.push_back(std::min(start, file_size - max_length));
    }
    return offsets;
}

}  // namespace detail

/// Evaluates every (length, threshold, distance) coordinate over the
/// corpus. Per file, fragment offsets are drawn once for the whole grid
/// and each fragment is curved once; every coordinate is then decided from
/// the cumulative area table. For the single-fragment detector the
/// distance grid collapses to {0}.
inline SweepResult sweep(const Manifest& manifest, int fragments, const ParamGrid& grid_in,
                         std::uint64_t seed, unsigned workers = 1) {
    if (manifest.entries.empty()) throw std::runtime_error("sweep: empty corpus");
    ParamGrid grid = grid_in;
    if (fragments == 1) grid.distances = {0.0};
    if (grid.lengths.empty() || grid.thresholds.empty() || grid.distances.empty())
        throw std::invalid_argument("sweep: empty parameter grid");
    for (std::size_t l : grid.lengths) {
        DetectorParams probe;
        probe.fragment_length = l;
        probe.validate();
    }

    const ReferenceFragment reference = ReferenceFragment::generate(seed);
    const std::size_t n_len = grid.lengths.size();
    const std::size_t n_thr = grid.thresholds.size();
    const std::size_t n_dst = grid.distances.size();
    const std::size_t n_cells = n_len * n_thr * n_dst;
    const std::size_t max_length = *std::max_element(grid.lengths.begin(), grid.lengths.end());

    const unsigned lanes = std::max(1u, workers);
    std::vector<std::vector<detail::ConfusionCell>> cells(lanes);
    for (auto& lane : cells) lane.resize(n_cells);
    std::vector<std::uint64_t> skipped_files(lanes, 0);

    detail::parallel_for(manifest.entries.size(), workers, [&](std::size_t i, unsigned lane) {
        const CorpusEntry& entry = manifest.entries[i];
        const std::vector<std::uint8_t> data = read_file(entry.path);
        if (data.size() < kCurveStep) {
            ++skipped_files[lane];
            return;
        }
        const bool positive = entry.label == Label::encrypted;
        SplitMix64 rng(mix_seed(seed, fnv1a(entry.path)));
        std::vector<std::size_t> offsets{0};
        const std::vector<std::size_t> frag_offsets =
            detail::sweep_offsets(data.size(), fragments, max_length, rng);
        offsets.insert(offsets.end(), frag_offsets.begin(), frag_offsets.end());
        const std::vector<FragmentAreaCurve> areas = cumulative_areas(data, reference, offsets);

        auto& lane_cells = cells[lane];
        for (std::size_t li = 0; li < n_len; ++li) {
            const std::size_t length = grid.lengths[li];
            const double header = areas[0].value_at(length);
            double competing = 0.0;
            const bool with_fragments = frag_offsets.size() > 0;
            if (with_fragments) {
                double sum = 0.0;
                for (std::size_t f = 1; f < areas.size(); ++f) sum += areas[f].value_at(length);
                competing = sum / static_cast<double>(areas.size() - 1);
            }
            for (std::size_t di = 0; di < n_dst; ++di) {
                const double selected =
                    (fragments == 1 || !with_fragments)
                        ? header
                        : select_area(header, competing, grid.distances[di]);
                for (std::size_t ti = 0; ti < n_thr; ++ti) {
                    const bool encrypted = selected < grid.thresholds[ti];
                    auto& cell = lane_cells[(li * n_thr + ti) * n_dst + di];
                    if (encrypted)
                        positive ? ++cell.tp : ++cell.fp;
                    else
                        positive ? ++cell.fn : ++cell.tn;
                }
            }
        }
    });

    std::vector<detail::ConfusionCell> total(n_cells);
    std::uint64_t skipped = 0;
    for (unsigned lane = 0; lane < lanes; ++lane) {
        skipped += skipped_files[lane];
        for (std::size_t c = 0; c < n_cells; ++c) {
            total[c].tp += cells[lane][c].tp;
            total[c].fp += cells[lane][c].fp;
            total[c].tn += cells[lane][c].tn;
            total[c].fn += cells[lane][c].fn;
        }
    }

    SweepResult result;
    result.points.reserve(n_cells);
    double best_accuracy = -1.0;
    for (std::size_t li = 0; li < n_len; ++li) {
        for (std::size_t ti = 0; ti < n_thr; ++ti) {
            for (std::size_t di = 0; di < n_dst; ++di) {
                const auto& cell = total[(li * n_thr + ti) * n_dst + di];
                SweepPoint point;
                point.params.fragment_length = grid.lengths[li];
                point.params.threshold = grid.thresholds[ti];
                point.params.distance = grid.distances[di];
                point.params.fragments = fragments;
                point.params.seed = seed;
                point.metrics =
                    MetricsReport::from_counts(cell.tp, cell.fp, cell.tn, cell.fn, skipped);
                best_accuracy = std::max(best_accuracy, point.metrics.accuracy);
                result.points.push_back(std::move(point));
            }
        }
    }
    for (std::size_t i = 0; i < result.points.size(); ++i)
        if (result.points[i].metrics.accuracy == best_accuracy) result.best.push_back(i);
    return result;
}

struct TypeAccuracy {
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    double accuracy = 0.0;
};

/// Accuracy grouped by manifest type tag. Verdicts must be aligned with
/// manifest entries; too-small fallbacks are left out, and groups with no
/// scored entries do not appear.
inline std::map<std::string, TypeAccuracy> per_type_breakdown(std::span<const Verdict> verdicts,
                                                              const Manifest& manifest) {
    if (verdicts.size() != manifest.entries.size())
        throw std::invalid_argument("per_type_breakdown: " + std::to_string(verdicts.size()) +
                                    " verdicts for " + std::to_string(manifest.entries.size()) +
                                    " entries");
    std::map<std::string, TypeAccuracy> groups;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].fallback == Fallback::too_small) continue;
        TypeAccuracy& g = groups[manifest.entries[i].type_tag];
        ++g.total;
        if (verdicts[i].encrypted == (manifest.entries[i].label == Label::encrypted)) ++g.correct;
    }
    for (auto& [tag, g] : groups)
        g.accuracy = static_cast<double>(g.correct) / static_cast<double>(g.total);
    return groups;
}

struct ThroughputReport {
    std::string detector;
    double files_per_second = 0.0;
    std::size_t corpus_size = 0;
    double wall_seconds = 0.0;  // the median repetition; files_per_second = size / wall
};

/// Wall-clock files/second per detector: every repetition opens, reads and
/// classifies the whole corpus, detectors interleaved within a repetition,
/// and the lower-median repetition is reported. Single worker, so rates
/// are comparable across detectors.
inline std::vector<ThroughputReport> bench(const Manifest& manifest,
                                           std::span<const int> fragment_counts,
                                           std::size_t repetitions, std::uint64_t seed) {
    if (repetitions < 1) throw std::invalid_argument("bench: repetitions must be >= 1");
    if (manifest.entries.empty()) throw std::runtime_error("bench: empty corpus");
    if (fragment_counts.empty()) throw std::invalid_argument("bench: no detectors");

    const ReferenceFragment reference = ReferenceFragment::generate(seed);
    std::vector<std::vector<double>> walls(fragment_counts.size());
    std::vector<std::uint8_t> buffer;

    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (std::size_t k = 0; k < fragment_counts.size(); ++k) {
            const DetectorParams params = DetectorParams::defaults_for(fragment_counts[k], seed);
            std::size_t flagged = 0;
            const auto t0 = std::chrono::steady_clock::now();
            for (const CorpusEntry& entry : manifest.entries) {
                read_file_into(entry.path, buffer);
                const Verdict v = classify(buffer, params, reference, fnv1a(entry.path));
                flagged += v.encrypted ? 1 : 0;
            }
            const auto t1 = std::chrono::steady_clock::now();
            asm volatile("" : : "g"(flagged) : "memory");  // keep classify from being elided
            walls[k].push_back(std::chrono::duration<double>(t1 - t0).count());
        }
    }

    std::vector<ThroughputReport> reports;
    reports.reserve(fragment_counts.size());
    for (std::size_t k = 0; k < fragment_counts.size(); ++k) {
        std::sort(walls[k].begin(), walls[k].end());
        const double wall = walls[k][(repetitions - 1) / 2];  // lower median
        ThroughputReport r;
        r.detector = detector_name(fragment_counts[k]);
        r.corpus_size = manifest.entries.size();
        r.wall_seconds = wall;
        r.files_per_second = static_cast<double>(manifest.entries.size()) / wall;
        reports.push_back(std::move(r));
    }
    return reports;
}

struct StressCell {
    std::size_t injection_length = 0;  // n
    std::size_t jump_length = 0;       // m
    std::uint64_t detected = 0;
    std::uint64_t total = 0;
    double accuracy = 0.0;  // detection rate over the stressed encrypted files
};

/// Detection accuracy of one detector over the encrypted entries of the
/// manifest after stress injection, for every (n, m) grid cell. Cells are
/// ordered n-major. The injected byte is drawn once per file and reused
/// across cells.
inline std::vector<StressCell> stress_eval(const Manifest& manifest, const DetectorParams& params,
                                           std::span<const std::size_t> injection_lengths,
                                           std::span<const std::size_t> jump_lengths,
                                           std::uint64_t seed) {
    params.validate();
    struct LoadedFile {
        std::vector<std::uint8_t> bytes;
        std::uint64_t key = 0;
        std::uint64_t stress_seed = 0;
    };
    std::vector<LoadedFile> files;
    for (const CorpusEntry& entry : manifest.entries) {
        if (entry.label != Label::encrypted) continue;
        LoadedFile f;
        f.bytes = read_file(entry.path);
        f.key = fnv1a(entry.path);
        f.stress_seed = mix_seed(seed, f.key);
        files.push_back(std::move(f));
    }
    if (files.empty()) throw std::runtime_error("stress_eval: no encrypted entries in corpus");

    const ReferenceFragment reference = ReferenceFragment::generate(params.seed);
    std::vector<StressCell> cells;
    cells.reserve(injection_lengths.size() * jump_lengths.size());
    for (std::size_t n : injection_lengths) {
        for (std::size_t m : jump_lengths) {
            StressCell cell;
            cell.injection_length = n;
            cell.jump_length = m;
            for (const LoadedFile& f : files) {
                const std::vector<std::uint8_t> stressed =
                    stress_inject(f.bytes, StressSpec{n, m, f.stress_seed});
                const Verdict v = classify(stressed, params, reference, f.key);
                if (v.fallback == Fallback::too_small) continue;
                ++cell.total;
                if (v.encrypted) ++cell.detected;
            }
            cell.accuracy = cell.total == 0
                                ? 0.0
                                : static_cast<double>(cell.detected) /
                                      static_cast<double>(cell.total);
            cells.push_back(cell);
        }
    }
    return cells;
}

/// Smallest injected fraction n/m whose cell accuracy fell below the floor;
/// +inf when no stressed cell did.
inline double first_failure_fraction(std::span<const StressCell> cells, double accuracy_floor) {
    double fraction = std::numeric_limits<double>::infinity();
    for (const StressCell& cell : cells) {
        if (cell.injection_length == 0 || cell.accuracy >= accuracy_floor) continue;
        fraction = std::min(fraction, static_cast<double>(cell.injection_length) /
                                          static_cast<double>(cell.jump_length));
    }
    return fraction;
}

}  // namespace daa
