#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "daa/detector.hpp"
#include "daa/forge.hpp"
#include "oracles.hpp"

using namespace daa;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t size, std::uint64_t seed) {
    std::vector<std::uint8_t> buf(size);
    SplitMix64(seed).fill(buf);
    return buf;
}

}  // namespace

TEST_CASE("forge_low_h prepends a constant 256-byte block") {
    const auto input = random_bytes(1000, 1);
    const auto out = forge_low_h(input);
    REQUIRE(out.size() == 1256);
    for (std::size_t i = 0; i < 256; ++i) REQUIRE(out[i] == 'a');
    CHECK(std::equal(input.begin(), input.end(), out.begin() + 256));

    const EntropyCurve curve = entropy_curve(out, 0, 256);
    for (const CurvePoint& p : curve.points) CHECK(p.entropy == 0.0);
}

TEST_CASE("forge_low_h on empty input is just the block") {
    const auto out = forge_low_h(std::vector<std::uint8_t>{});
    REQUIRE(out.size() == 256);
    CHECK(std::all_of(out.begin(), out.end(), [](std::uint8_t b) { return b == 'a'; }));
}

TEST_CASE("forge_rep_bytes tiles the first 8 bytes over the header") {
    SECTION("eight distinct lead bytes give a 3-bit header") {
        std::vector<std::uint8_t> input{0x10, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88};
        const auto tail = random_bytes(992, 2);
        input.insert(input.end(), tail.begin(), tail.end());
        const auto out = forge_rep_bytes(input);
        REQUIRE(out.size() == input.size());
        for (std::size_t i = 0; i < 256; ++i) REQUIRE(out[i] == input[i % 8]);
        CHECK(std::equal(input.begin() + 256, input.end(), out.begin() + 256));
        CHECK(byte_entropy(out, 0, 256) == 3.0);
    }
    SECTION("identical lead bytes give a flat zero header") {
        std::vector<std::uint8_t> input(512, 0);
        SplitMix64(3).fill(std::span(input).subspan(8));
        std::fill_n(input.begin(), 8, 0xAB);
        const auto out = forge_rep_bytes(input);
        CHECK(byte_entropy(out, 0, 256) == 0.0);
    }
    SECTION("short files grow to the full 256-byte tile") {
        const auto input = random_bytes(40, 4);
        const auto out = forge_rep_bytes(input);
        REQUIRE(out.size() == 256);
        for (std::size_t i = 0; i < 256; ++i) REQUIRE(out[i] == input[i % 8]);
    }
    SECTION("under 8 bytes is rejected") {
        CHECK_THROWS_AS(forge_rep_bytes(random_bytes(7, 5)), std::invalid_argument);
    }
}

TEST_CASE("forged headers escape the single-fragment detector at length 152") {
    const ReferenceFragment ref = ReferenceFragment::generate(0);
    DetectorParams daa;
    daa.fragments = 1;
    daa.fragment_length = 152;
    daa.threshold = 40.0;
    daa.distance = 0.0;

    const auto file = random_bytes(4096, 99);
    REQUIRE(classify_daa(file, daa, ref).encrypted);  // caught before forging

    const auto rep = forge_rep_bytes(file);
    const Verdict v_rep = classify_daa(rep, daa, ref);
    const double expected = oracle::naive_differential_area(ref.bytes, rep, 0, 152);
    CHECK_THAT(v_rep.selected_area, Catch::Matchers::WithinAbs(expected, 1e-9));
    CHECK(expected > 40.0);
    CHECK_FALSE(v_rep.encrypted);

    const auto low = forge_low_h(file);
    CHECK_FALSE(classify_daa(low, daa, ref).encrypted);
}

TEST_CASE("forge_com_seq rebuilds the header from the sequence pool") {
    const auto input = random_bytes(2048, 7);
    const auto out = forge_com_seq(input, 42);
    REQUIRE(out.size() == input.size());
    CHECK(std::equal(input.begin() + 256, input.end(), out.begin() + 256));

    SECTION("first 256 bytes come only from pool characters") {
        std::set<std::uint8_t> pool_bytes;
        for (std::string_view item : kComSeqPool)
            for (char c : item) pool_bytes.insert(static_cast<std::uint8_t>(c));
        for (std::size_t i = 0; i < 256; ++i) REQUIRE(pool_bytes.count(out[i]) == 1);
    }
    SECTION("same seed reproduces the same output") {
        CHECK(forge_com_seq(input, 42) == out);
        CHECK(forge_com_seq(input, 43) != out);
    }
    SECTION("header keeps mixed-sequence entropy") {
        CHECK(byte_entropy(out, 0, 48) >= 2.0);
    }
    SECTION("too-short input is rejected") {
        CHECK_THROWS_AS(forge_com_seq(random_bytes(255, 8), 1), std::invalid_argument);
    }
}

TEST_CASE("com-seq headers stay close to the reference at short lengths") {
    // the alphabets lead, so the first ~50 bytes are as byte-diverse as a
    // random fragment and the differential area at length 48 stays tiny
    const ReferenceFragment ref = ReferenceFragment::generate(0);
    DetectorParams daa48;
    daa48.fragments = 1;
    daa48.fragment_length = 48;
    daa48.threshold = 14.0;
    daa48.distance = 0.0;
    SplitMix64 seeds(11);
    int caught = 0;
    for (int round = 0; round < 20; ++round) {
        const auto forged = forge_com_seq(random_bytes(4096, seeds.next()), seeds.next());
        caught += classify_daa(forged, daa48, ref).encrypted ? 1 : 0;
    }
    CHECK(caught >= 19);
}

TEST_CASE("stress_inject size arithmetic") {
    SECTION("2 bytes per 44 grows 4400 bytes to 4600") {
        const auto input = random_bytes(4400, 1);
        const auto out = stress_inject(input, StressSpec{2, 44, 9});
        CHECK(out.size() == 4600);
    }
    SECTION("8 bytes per 40 grows by 20 percent") {
        const auto input = random_bytes(4000, 2);
        const auto out = stress_inject(input, StressSpec{8, 40, 9});
        CHECK(out.size() == 4800);
    }
    SECTION("12 bytes per 36 grows by a third") {
        const auto input = random_bytes(3600, 3);
        const auto out = stress_inject(input, StressSpec{12, 36, 9});
        CHECK(out.size() == 4800);
    }
    SECTION("zero injection is the identity") {
        const auto input = random_bytes(513, 4);
        CHECK(stress_inject(input, StressSpec{0, 44, 9}) == input);
    }
}

TEST_CASE("stress_inject structure and determinism") {
    const auto input = random_bytes(1000, 5);
    const StressSpec spec{6, 8, 77};
    const auto out = stress_inject(input, spec);
    REQUIRE(out.size() == input.size() + 6 * (input.size() / 8));

    SECTION("deterministic under a fixed seed") {
        CHECK(stress_inject(input, spec) == out);
    }
    SECTION("one filler byte repeated in every run") {
        const std::uint8_t filler = out[8];
        for (std::size_t chunk = 0; chunk < input.size() / 8; ++chunk) {
            const std::size_t base = chunk * (8 + 6) + 8;
            for (std::size_t i = 0; i < 6; ++i) REQUIRE(out[base + i] == filler);
        }
    }
    SECTION("removing the injected runs restores the input") {
        std::vector<std::uint8_t> restored;
        std::size_t pos = 0;
        while (pos < out.size()) {
            const std::size_t take = std::min<std::size_t>(8, out.size() - pos);
            restored.insert(restored.end(), out.begin() + pos, out.begin() + pos + take);
            pos += take + 6;
        }
        CHECK(restored == input);
    }
}

TEST_CASE("stress_inject size formula holds across the whole grid") {
    SplitMix64 rng(6);
    for (std::size_t n = 0; n <= 64; n += 2) {
        for (std::size_t m = 4; m <= 64; m += 4) {
            const std::size_t size = 1 + rng.next_below(3000);
            const auto input = random_bytes(size, rng.next());
            const auto out = stress_inject(input, StressSpec{n, m, rng.next()});
            REQUIRE(out.size() == size + n * (size / m));
        }
    }
}

TEST_CASE("stress spec validation") {
    CHECK_THROWS_AS((StressSpec{3, 44, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StressSpec{66, 44, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StressSpec{2, 2, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StressSpec{2, 42, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StressSpec{2, 68, 0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((StressSpec{0, 4, 0}.validate()));
    CHECK_NOTHROW((StressSpec{64, 64, 0}.validate()));
}

TEST_CASE("apply_attack dispatches on the attack kind") {
    const auto input = random_bytes(1024, 8);
    CHECK(apply_attack(input, {AttackKind::low_h, 0}) == forge_low_h(input));
    CHECK(apply_attack(input, {AttackKind::rep_bytes, 0}) == forge_rep_bytes(input));
    CHECK(apply_attack(input, {AttackKind::com_seq, 5}) == forge_com_seq(input, 5));
}

TEST_CASE("attack suffixes use the corpus naming convention") {
    CHECK(std::string(attack_suffix(AttackKind::low_h)) == "low-H");
    CHECK(std::string(attack_suffix(AttackKind::rep_bytes)) == "rep-bytes");
    CHECK(std::string(attack_suffix(AttackKind::com_seq)) == "com-seq");
}
