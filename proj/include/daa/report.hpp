#pragma once

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "daa/detector.hpp"
#include "daa/eval.hpp"
#include "daa/io.hpp"

namespace daa {

/// Fixed-precision decimal used in delimited reports so identical runs
/// serialize identically.
inline std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline nlohmann::json to_json(const DetectorParams& p) {
    return {
        {"length", p.fragment_length}, {"threshold", p.threshold}, {"distance", p.distance},
        {"fragments", p.fragments},    {"seed", p.seed},
    };
}

inline nlohmann::json to_json(const MetricsReport& m) {
    return {
        {"tp", m.tp},           {"fp", m.fp},
        {"tn", m.tn},           {"fn", m.fn},
        {"skipped", m.skipped}, {"accuracy", m.accuracy},
        {"precision", m.precision}, {"recall", m.recall},
        {"f1", m.f1},           {"degenerate", m.degenerate},
    };
}

inline nlohmann::json to_json(const SweepResult& r) {
    nlohmann::json points = nlohmann::json::array();
    for (const SweepPoint& p : r.points)
        points.push_back({{"params", to_json(p.params)}, {"metrics", to_json(p.metrics)}});
    nlohmann::json best = nlohmann::json::array();
    for (std::size_t i : r.best) best.push_back(i);
    return {{"points", points}, {"best", best}};
}

inline nlohmann::json to_json(const ThroughputReport& r) {
    return {
        {"detector", r.detector},
        {"files_per_second", r.files_per_second},
        {"corpus_size", r.corpus_size},
        {"wall_seconds", r.wall_seconds},
    };
}

inline nlohmann::json to_json(std::span<const StressCell> cells) {
    nlohmann::json out = nlohmann::json::array();
    for (const StressCell& c : cells)
        out.push_back({{"n", c.injection_length},
                       {"m", c.jump_length},
                       {"detected", c.detected},
                       {"total", c.total},
                       {"accuracy", c.accuracy}});
    return out;
}

/// Report envelope: everything reproducible lives under "payload"; the
/// timestamp sits outside it so two identical runs differ in no payload
/// byte.
inline std::string render_report(const nlohmann::json& payload) {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    nlohmann::json envelope;
    envelope["generated_at"] = stamp;
    envelope["payload"] = payload;
    return envelope.dump(2) + "\n";
}

inline void write_report(const std::filesystem::path& path, const nlohmann::json& payload) {
    write_text_atomic(path, render_report(payload));
}

// --- delimited emitters -----------------------------------------------

inline std::string sweep_points_tsv(const SweepResult& r) {
    std::string out =
        "length\tthreshold\tdistance\ttp\tfp\ttn\tfn\tskipped\taccuracy\tprecision\trecall\tf1\n";
    for (const SweepPoint& p : r.points) {
        out += std::to_string(p.params.fragment_length) + '\t' + fmt6(p.params.threshold) + '\t' +
               fmt6(p.params.distance) + '\t' + std::to_string(p.metrics.tp) + '\t' +
               std::to_string(p.metrics.fp) + '\t' + std::to_string(p.metrics.tn) + '\t' +
               std::to_string(p.metrics.fn) + '\t' + std::to_string(p.metrics.skipped) + '\t' +
               fmt6(p.metrics.accuracy) + '\t' + fmt6(p.metrics.precision) + '\t' +
               fmt6(p.metrics.recall) + '\t' + fmt6(p.metrics.f1) + '\n';
    }
    return out;
}

/// Accuracy against subfragment length, one series per threshold, with the
/// distance frozen at the best point's value.
inline std::string sweep_plot_by_threshold(const SweepResult& r) {
    const double fixed_distance = r.best_point().params.distance;
    std::string out = "length\taccuracy\tthreshold\n";
    for (const SweepPoint& p : r.points) {
        if (p.params.distance != fixed_distance) continue;
        out += std::to_string(p.params.fragment_length) + '\t' + fmt6(p.metrics.accuracy) + '\t' +
               fmt6(p.params.threshold) + '\n';
    }
    return out;
}

/// Accuracy against subfragment length, one series per distance, with the
/// threshold frozen at the best point's value.
inline std::string sweep_plot_by_distance(const SweepResult& r) {
    const double fixed_threshold = r.best_point().params.threshold;
    std::string out = "length\taccuracy\tdistance\n";
    for (const SweepPoint& p : r.points) {
        if (p.params.threshold != fixed_threshold) continue;
        out += std::to_string(p.params.fragment_length) + '\t' + fmt6(p.metrics.accuracy) + '\t' +
               fmt6(p.params.distance) + '\n';
    }
    return out;
}

inline std::string bench_tsv(std::span<const ThroughputReport> reports) {
    std::string out = "detector\tfiles_per_second\tcorpus_size\twall_seconds\n";
    for (const ThroughputReport& r : reports)
        out += r.detector + '\t' + fmt6(r.files_per_second) + '\t' +
               std::to_string(r.corpus_size) + '\t' + fmt6(r.wall_seconds) + '\n';
    return out;
}

/// Long-form stress grid: injected length, jump length, fraction, accuracy.
inline std::string stress_tsv(std::span<const StressCell> cells) {
    std::string out = "n\tm\tfraction\taccuracy\tdetected\ttotal\n";
    for (const StressCell& c : cells)
        out += std::to_string(c.injection_length) + '\t' + std::to_string(c.jump_length) + '\t' +
               fmt6(static_cast<double>(c.injection_length) /
                    static_cast<double>(c.jump_length)) +
               '\t' + fmt6(c.accuracy) + '\t' + std::to_string(c.detected) + '\t' +
               std::to_string(c.total) + '\n';
    return out;
}

inline std::string breakdown_tsv(const std::map<std::string, TypeAccuracy>& groups) {
    std::string out = "type\ttotal\tcorrect\taccuracy\n";
    for (const auto& [tag, g] : groups)
        out += tag + '\t' + std::to_string(g.total) + '\t' + std::to_string(g.correct) + '\t' +
               fmt6(g.accuracy) + '\n';
    return out;
}

}  // namespace daa
