#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "daa/forge.hpp"
#include "daa/io.hpp"
#include "daa/rng.hpp"

namespace daa {

enum class Label { plain, encrypted };

inline const char* to_string(Label l) { return l == Label::plain ? "plain" : "encrypted"; }

inline Label label_from_string(std::string_view s) {
    if (s == "plain") return Label::plain;
    if (s == "encrypted") return Label::encrypted;
    throw std::invalid_argument("unknown label '" + std::string(s) + "'");
}

/// Which transformation produced a corpus file, if any.
struct AttackTag {
    enum class Kind { none, low_h, rep_bytes, com_seq, stress };

    Kind kind = Kind::none;
    std::size_t injection_length = 0;  // stress only
    std::size_t jump_length = 0;       // stress only

    bool operator==(const AttackTag&) const = default;

    static AttackTag none() { return {}; }
    static AttackTag from(AttackKind k) {
        switch (k) {
            case AttackKind::low_h: return {Kind::low_h};
            case AttackKind::rep_bytes: return {Kind::rep_bytes};
            case AttackKind::com_seq: return {Kind::com_seq};
        }
        return {};
    }
    static AttackTag stress(std::size_t n, std::size_t m) { return {Kind::stress, n, m}; }

    std::string to_string() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::low_h: return "low-H";
            case Kind::rep_bytes: return "rep-bytes";
            case Kind::com_seq: return "com-seq";
            case Kind::stress:
                return "stress-n" + std::to_string(injection_length) + "-m" +
                       std::to_string(jump_length);
        }
        return "?";
    }

    static AttackTag parse(std::string_view s) {
        if (s == "none") return {};
        if (s == "low-H") return {Kind::low_h};
        if (s == "rep-bytes") return {Kind::rep_bytes};
        if (s == "com-seq") return {Kind::com_seq};
        if (s.starts_with("stress-n")) {
            const std::size_t dash = s.find("-m", 8);
            if (dash != std::string_view::npos) {
                AttackTag tag{Kind::stress};
                const auto n_part = s.substr(8, dash - 8);
                const auto m_part = s.substr(dash + 2);
                auto r1 = std::from_chars(n_part.data(), n_part.data() + n_part.size(),
                                          tag.injection_length);
                auto r2 = std::from_chars(m_part.data(), m_part.data() + m_part.size(),
                                          tag.jump_length);
                if (r1.ec == std::errc{} && r2.ec == std::errc{}) return tag;
            }
        }
        throw std::invalid_argument("unknown attack tag '" + std::string(s) + "'");
    }
};

/// One labeled corpus file.
struct CorpusEntry {
    std::string path;
    Label label = Label::plain;
    std::string type_tag;  // e.g. "text", "rand", "pdf"
    AttackTag attack;
    std::uint64_t size = 0;
};

/// A labeled file list, serialized as line-delimited text:
///   # daa-manifest 1
///   # seed <u64>            (only when a generator produced it)
///   <path>\t<label>\t<type_tag>\t<attack>\t<size>
/// Entries are kept sorted by path and paths are unique.
struct Manifest {
    std::vector<CorpusEntry> entries;
    std::optional<std::uint64_t> generator_seed;

    void sort_and_check() {
        std::sort(entries.begin(), entries.end(),
                  [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].path == entries[i - 1].path)
                throw std::invalid_argument("manifest: duplicate path " + entries[i].path);
        for (const CorpusEntry& e : entries) {
            if (e.label == Label::plain && e.attack.kind != AttackTag::Kind::none &&
                e.attack.kind != AttackTag::Kind::stress)
                throw std::invalid_argument("manifest: plain entry " + e.path +
                                            " carries header-attack tag " + e.attack.to_string());
        }
    }

    std::string serialize() const {
        std::ostringstream out;
        out << "# daa-manifest 1\n";
        if (generator_seed) out << "# seed " << *generator_seed << "\n";
        for (const CorpusEntry& e : entries) {
            if (e.path.find_first_of("\t\n") != std::string::npos)
                throw std::invalid_argument("manifest: path contains tab or newline: " + e.path);
            out << e.path << '\t' << daa::to_string(e.label) << '\t' << e.type_tag << '\t'
                << e.attack.to_string() << '\t' << e.size << '\n';
        }
        return out.str();
    }

    void save(const std::filesystem::path& path) const { write_text_atomic(path, serialize()); }

    static Manifest deserialize(std::string_view text) {
        Manifest m;
        std::size_t pos = 0;
        bool magic_seen = false;
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            const std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            if (line.empty()) continue;
            if (line[0] == '#') {
                if (line.starts_with("# daa-manifest")) magic_seen = true;
                if (line.starts_with("# seed ")) {
                    std::uint64_t seed = 0;
                    const auto digits = line.substr(7);
                    if (std::from_chars(digits.data(), digits.data() + digits.size(), seed).ec ==
                        std::errc{})
                        m.generator_seed = seed;
                }
                continue;
            }
            if (!magic_seen)
                throw std::invalid_argument("manifest: missing '# daa-manifest' header line");
            std::array<std::string_view, 5> fields;
            std::size_t field = 0, start = 0;
            for (std::size_t i = 0; i <= line.size() && field < 5; ++i) {
                if (i == line.size() || line[i] == '\t') {
                    fields[field++] = line.substr(start, i - start);
                    start = i + 1;
                }
            }
            if (field != 5)
                throw std::invalid_argument("manifest: malformed line '" + std::string(line) + "'");
            CorpusEntry e;
            e.path = std::string(fields[0]);
            e.label = label_from_string(fields[1]);
            e.type_tag = std::string(fields[2]);
            e.attack = AttackTag::parse(fields[3]);
            std::uint64_t size = 0;
            if (std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), size).ec !=
                std::errc{})
                throw std::invalid_argument("manifest: bad size in line '" + std::string(line) +
                                            "'");
            e.size = size;
            m.entries.push_back(std::move(e));
        }
        m.sort_and_check();
        return m;
    }

    static Manifest load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open manifest " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return deserialize(buf.str());
    }
};

/// Shell-style pattern match supporting '*' and '?'.
inline bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0, t = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

/// Maps filenames matching `pattern` to a label and type tag.
struct LabelRule {
    std::string pattern;
    Label label = Label::plain;
    std::string type_tag;
};

/// Attack tag recovered from the filename suffix conventions used by the
/// forge commands ("low-H", "rep-bytes", "com-seq", "stress-n<k>-m<j>").
inline AttackTag attack_from_name(std::string_view name) {
    const std::size_t dot = name.find_last_of('.');
    if (dot == std::string_view::npos) return {};
    const std::string_view suffix = name.substr(dot + 1);
    if (suffix == "low-H" || suffix == "rep-bytes" || suffix == "com-seq" ||
        suffix.starts_with("stress-n")) {
        try {
            return AttackTag::parse(suffix);
        } catch (const std::invalid_argument&) {
            return {};
        }
    }
    return {};
}

struct IngestResult {
    Manifest manifest;
    std::vector<std::string> unmatched;  // regular files no rule claimed
};

/// Walks `root` recursively and labels every regular file by the first
/// matching rule. Unmatched files are reported back, never dropped
/// silently. Zero matched files is an error.
inline IngestResult ingest(const std::filesystem::path& root, std::span<const LabelRule> rules) {
    namespace fs = std::filesystem;
    IngestResult result;
    for (const auto& walk_entry : fs::recursive_directory_iterator(root)) {
        if (!walk_entry.is_regular_file()) continue;
        const std::string name = walk_entry.path().filename().string();
        const LabelRule* matched = nullptr;
        for (const LabelRule& rule : rules) {
            if (glob_match(rule.pattern, name)) {
                matched = &rule;
                break;
            }
        }
        if (!matched) {
            result.unmatched.push_back(walk_entry.path().string());
            continue;
        }
        CorpusEntry e;
        e.path = walk_entry.path().string();
        e.label = matched->label;
        e.type_tag = matched->type_tag;
        e.attack = attack_from_name(name);
        e.size = walk_entry.file_size();
        result.manifest.entries.push_back(std::move(e));
    }
    if (result.manifest.entries.empty())
        throw std::runtime_error("ingest: no files under " + root.string() +
                                 " matched any labeling rule");
    result.manifest.sort_and_check();
    std::sort(result.unmatched.begin(), result.unmatched.end());
    return result;
}

/// How many files of each class the synthetic generator should emit.
struct SyntheticSpec {
    std::size_t plain_count = 0;
    std::size_t encrypted_count = 0;
};

namespace detail {

inline constexpr std::array<std::string_view, 40> kTextVocab = {
    "the",     "quick",   "report",  "from",    "archive", "records", "that",    "every",
    "section", "holds",   "a",       "table",   "of",      "values",  "updated", "weekly",
    "by",      "staff",   "and",     "checked", "against", "earlier", "entries", "before",
    "release", "to",      "readers", "who",     "follow",  "these",   "pages",   "for",
    "news",    "about",   "ongoing", "work",    "within",  "several", "regional", "offices",
};

/// Templated prose: seeded sentences over a fixed vocabulary.
inline void fill_text(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
    std::string buf;
    buf.reserve(size + 80);
    std::size_t sentence = 0;
    while (buf.size() < size) {
        const std::size_t words = 6 + rng.next_below(9);
        for (std::size_t w = 0; w < words; ++w) {
            if (w > 0) buf += ' ';
            buf += kTextVocab[rng.next_below(kTextVocab.size())];
        }
        buf += rng.next_below(8) == 0 ? ";\n" : ". ";
        if (++sentence % 5 == 0) buf += '\n';
    }
    buf.resize(size);
    out.assign(buf.begin(), buf.end());
}

/// Magic header plus fixed-layout records with small integer fields.
inline void fill_binary(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
    out.clear();
    out.reserve(size + 32);
    const auto push_u32 = [&](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    };
    const auto push_u64 = [&](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    };
    out.insert(out.end(), {0x89, 'S', 'B', 'F', '\r', '\n', 0x1a, 0x00});
    push_u32(1);  // format version
    push_u32(static_cast<std::uint32_t>(size / 32));
    std::uint64_t id = rng.next_below(1000);
    std::uint32_t tick = 1700000000u + static_cast<std::uint32_t>(rng.next_below(100000));
    while (out.size() < size) {
        push_u64(id++);
        push_u32(tick += static_cast<std::uint32_t>(rng.next_below(60)));
        out.push_back(static_cast<std::uint8_t>(rng.next_below(8)));
        out.push_back(static_cast<std::uint8_t>(rng.next_below(4)));
        push_u32(static_cast<std::uint32_t>(rng.next_below(65536)));
        for (int pad = 0; pad < 14; ++pad) out.push_back(0);
    }
    out.resize(size);
}

/// Structured markup header followed by a high-entropy payload, the shape
/// of container documents whose tails are compressed streams.
inline void fill_mixed(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
    std::string head;
    const std::size_t head_len = std::min(size, std::size_t{1024} + rng.next_below(1024));
    head.reserve(head_len + 64);
    head += "%SDC-1.3\n";
    std::size_t obj = 1;
    while (head.size() < head_len) {
        head += "obj " + std::to_string(obj) + " 0 << /Type /Node /Len " +
                std::to_string(40 + rng.next_below(400)) + " /Flags " +
                std::to_string(rng.next_below(16)) + " >>\nstream metadata segment " +
                std::to_string(obj) + "\nendobj\n";
        ++obj;
    }
    head.resize(head_len);
    out.assign(head.begin(), head.end());
    const std::size_t tail = size - head_len;
    out.resize(size);
    rng.fill(std::span<std::uint8_t>(out.data() + head_len, tail));
}

/// Compressed-container shape: a structured magic-and-table prefix over a
/// high-entropy body with sparse chunk marks. Its header area flattens out
/// past the prefix, which is what punishes large-threshold detector
/// settings on real compressed formats.
inline void fill_packed(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
    out.clear();
    out.reserve(size + 16);
    out.insert(out.end(), {0x50, 0x4b, 0x07, 0x7a, 0x01, 0x00, 0x00, 0x00});
    for (char c : std::string_view("archive-index-01")) out.push_back(c);
    while (out.size() < 48) {
        out.push_back(static_cast<std::uint8_t>(32 + rng.next_below(16)));
        out.push_back(static_cast<std::uint8_t>(rng.next_below(8)));
    }
    const std::size_t mark_period = 768 + rng.next_below(768);
    std::size_t next_mark = 48 + mark_period;
    while (out.size() < size) {
        if (out.size() >= next_mark) {
            for (char c : std::string_view("CHNK")) out.push_back(c);
            const std::uint32_t len = static_cast<std::uint32_t>(rng.next_below(4096));
            for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(len >> (8 * b)));
            out.push_back(0);
            out.push_back(0);
            next_mark += mark_period;
        }
        out.push_back(rng.next_byte());
    }
    out.resize(size);
}

/// End-to-end pseudo-random payload, the entropy profile of a file after
/// strong encryption.
inline void fill_random(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
    out.resize(size);
    rng.fill(out);
}

/// Pseudo-random payload with a repeated marker byte stamped periodically,
/// emulating encrypted output that interleaves bookkeeping runs.
inline void fill_randpad(std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng,
                         std::size_t marker_len, std::size_t period) {
    fill_random(out, size, rng);
    const std::uint8_t marker = rng.next_byte();
    for (std::size_t pos = rng.next_below(period); pos < size; pos += period) {
        const std::size_t run = std::min(marker_len, size - pos);
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), run, marker);
    }
}

/// Log-uniform-ish size in [4 KiB, 1 MiB): a seeded power-of-two decade
/// plus a uniform offset within it.
inline std::size_t draw_size(SplitMix64& rng) {
    const std::size_t base = std::size_t{4096} << rng.next_below(8);
    return base + rng.next_below(base);
}

}  // namespace detail

/// Emits a labeled synthetic corpus under out_dir, laid out as
/// <out_dir>/<label>/<type_tag>/<name>. Plain files cycle through prose,
/// structured binary, and structured-header-plus-random-tail shapes;
/// encrypted files are seeded pseudo-random payloads, half of them with
/// periodic marker runs ("randpad" types). Same seed, same bytes.
inline Manifest generate_synthetic(const SyntheticSpec& spec,
                                   const std::filesystem::path& out_dir, std::uint64_t seed) {
    namespace fs = std::filesystem;
    Manifest manifest;
    manifest.generator_seed = seed;
    std::vector<std::uint8_t> bytes;

    const auto emit = [&](Label label, std::string_view type, std::string_view ext,
                          std::size_t index, auto&& fill) {
        char name[64];
        std::snprintf(name, sizeof(name), "%.*s-%05zu%.*s", static_cast<int>(type.size()),
                      type.data(), index, static_cast<int>(ext.size()), ext.data());
        const std::string rel =
            std::string(to_string(label)) + "/" + std::string(type) + "/" + name;
        SplitMix64 rng(mix_seed(seed, fnv1a(rel)));
        const std::size_t size = detail::draw_size(rng);
        fill(bytes, size, rng);
        const fs::path path = out_dir / rel;
        write_file(path, bytes);
        CorpusEntry e;
        e.path = path.string();
        e.label = label;
        e.type_tag = std::string(type);
        e.size = bytes.size();
        manifest.entries.push_back(std::move(e));
    };

    for (std::size_t i = 0; i < spec.plain_count; ++i) {
        switch (i % 4) {
            case 0: emit(Label::plain, "text", ".txt", i, detail::fill_text); break;
            case 1: emit(Label::plain, "binary", ".sbf", i, detail::fill_binary); break;
            case 2: emit(Label::plain, "packed", ".pkz", i, detail::fill_packed); break;
            default: emit(Label::plain, "mixed", ".doc", i, detail::fill_mixed); break;
        }
    }
    for (std::size_t i = 0; i < spec.encrypted_count; ++i) {
        switch (i % 4) {
            case 0:
            case 1:
                emit(Label::encrypted, "rand", ".crypt", i, detail::fill_random);
                break;
            case 2:
                emit(Label::encrypted, "randpad-4", ".crypt", i,
                     [](std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
                         detail::fill_randpad(out, size, rng, 4, 512);
                     });
                break;
            default:
                emit(Label::encrypted, "randpad-16", ".crypt", i,
                     [](std::vector<std::uint8_t>& out, std::size_t size, SplitMix64& rng) {
                         detail::fill_randpad(out, size, rng, 16, 512);
                     });
                break;
        }
    }
    manifest.sort_and_check();
    return manifest;
}

}  // namespace daa
