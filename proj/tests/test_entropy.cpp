#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "daa/entropy.hpp"
#include "oracles.hpp"

using namespace daa;

namespace {

std::vector<std::uint8_t> constant_buffer(std::size_t size, std::uint8_t value) {
    return std::vector<std::uint8_t>(size, value);
}

std::vector<std::uint8_t> random_buffer(std::size_t size, std::uint64_t seed) {
    std::vector<std::uint8_t> buf(size);
    SplitMix64(seed).fill(buf);
    return buf;
}

}  // namespace

TEST_CASE("byte_entropy on known distributions") {
    SECTION("single symbol has zero entropy") {
        const auto buf = constant_buffer(256, 0x61);
        CHECK(byte_entropy(buf, 0, 64) == 0.0);
    }
    SECTION("all 256 symbols once reach the 8-bit bound") {
        std::vector<std::uint8_t> buf(256);
        std::iota(buf.begin(), buf.end(), 0);
        CHECK(byte_entropy(buf, 0, 256) == 8.0);
    }
    SECTION("8 equiprobable symbols give log2(8)") {
        const std::vector<std::uint8_t> buf{0, 1, 2, 3, 4, 5, 6, 7};
        CHECK(byte_entropy(buf, 0, 8) == 3.0);
    }
}

TEST_CASE("byte_entropy rejects bad ranges") {
    const auto buf = constant_buffer(16, 1);
    CHECK_THROWS_AS(byte_entropy(buf, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(byte_entropy(buf, 8, 9), std::out_of_range);
    CHECK_THROWS_AS(byte_entropy(buf, 17, 1), std::out_of_range);
    CHECK_THROWS_WITH(byte_entropy(buf, 8, 9),
                      Catch::Matchers::ContainsSubstring("offset 8") &&
                          Catch::Matchers::ContainsSubstring("length 9") &&
                          Catch::Matchers::ContainsSubstring("size 16"));
}

TEST_CASE("byte_entropy bounds and permutation invariance") {
    SplitMix64 seeds(0xb0bb1e5);
    for (int round = 0; round < 200; ++round) {
        const std::size_t size = 1 + seeds.next_below(512);
        const auto buf = random_buffer(size, seeds.next());
        const double h = byte_entropy(buf, 0, size);
        REQUIRE(h >= 0.0);
        REQUIRE(h <= 8.0);

        // apply a byte-value permutation uniformly: entropy must not move
        std::array<std::uint8_t, 256> perm{};
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 255; i > 0; --i)
            std::swap(perm[i], perm[seeds.next_below(i + 1)]);
        std::vector<std::uint8_t> mapped(buf.size());
        std::transform(buf.begin(), buf.end(), mapped.begin(),
                       [&](std::uint8_t b) { return perm[b]; });
        REQUIRE_THAT(byte_entropy(mapped, 0, size),
                     Catch::Matchers::WithinAbs(h, 1e-12));
    }
}

TEST_CASE("entropy_curve on degenerate buffers") {
    SECTION("all-zero buffer curves at zero") {
        const auto buf = constant_buffer(256, 0);
        const EntropyCurve curve = entropy_curve(buf, 0, 256);
        REQUIRE(curve.points.size() == 32);
        for (const CurvePoint& p : curve.points) CHECK(p.entropy == 0.0);
        CHECK(curve.points.front().length == 8);
        CHECK(curve.points.back().length == 256);
    }
    SECTION("repeating 8-symbol block stays at 3 bits") {
        std::vector<std::uint8_t> buf;
        for (int rep = 0; rep < 32; ++rep)
            for (std::uint8_t b = 0; b < 8; ++b) buf.push_back(b);
        const EntropyCurve curve = entropy_curve(buf, 0, 16);
        REQUIRE(curve.points.size() == 2);
        CHECK(curve.points[0].length == 8);
        CHECK(curve.points[0].entropy == 3.0);
        CHECK(curve.points[1].length == 16);
        CHECK(curve.points[1].entropy == 3.0);
    }
}

TEST_CASE("entropy_curve parameter validation") {
    const auto buf = constant_buffer(64, 7);
    CHECK_THROWS_AS(entropy_curve(buf, 0, 12), std::invalid_argument);
    CHECK_THROWS_AS(entropy_curve(buf, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(entropy_curve(buf, 0, 264), std::invalid_argument);
    CHECK_THROWS_AS(entropy_curve(buf, 32, 40), std::out_of_range);
}

TEST_CASE("entropy_curve matches naive recomputation on the reference fragment") {
    const ReferenceFragment ref = ReferenceFragment::generate(99);
    const auto naive = oracle::naive_curve(ref.bytes, 0, 256);
    REQUIRE(ref.curve.points.size() == naive.size());
    for (std::size_t i = 0; i < naive.size(); ++i) {
        CHECK(ref.curve.points[i].length == naive[i].length);
        CHECK_THAT(ref.curve.points[i].entropy,
                   Catch::Matchers::WithinAbs(naive[i].entropy, 1e-9));
    }
}

TEST_CASE("entropy_curve matches naive recomputation on random buffers") {
    SplitMix64 seeds(0x1234);
    for (int round = 0; round < 1000; ++round) {
        const std::size_t size = 8 + seeds.next_below(4089);  // 8..4096
        const auto buf = random_buffer(size, seeds.next());
        const std::size_t max_len = std::min<std::size_t>(256, size - size % 8);
        const std::size_t length = 8 * (1 + seeds.next_below(max_len / 8));
        const std::size_t offset = seeds.next_below(size - length + 1);
        const EntropyCurve curve = entropy_curve(buf, offset, length);
        const auto naive = oracle::naive_curve(buf, offset, length);
        REQUIRE(curve.points.size() == naive.size());
        for (std::size_t i = 0; i < naive.size(); ++i) {
            REQUIRE(curve.points[i].length == naive[i].length);
            REQUIRE_THAT(curve.points[i].entropy,
                         Catch::Matchers::WithinAbs(naive[i].entropy, 1e-9));
        }
    }
}

TEST_CASE("trapezoid_area closed forms") {
    SECTION("constant 1.0 over [8, 256] integrates to the width") {
        std::vector<CurvePoint> samples;
        for (std::size_t x = 8; x <= 256; x += 8) samples.push_back({x, 1.0});
        CHECK(trapezoid_area(samples, 8) == 248.0);
    }
    SECTION("zero function integrates to zero") {
        std::vector<CurvePoint> samples;
        for (std::size_t x = 8; x <= 256; x += 8) samples.push_back({x, 0.0});
        CHECK(trapezoid_area(samples, 8) == 0.0);
    }
    SECTION("identity function over [8, 256]") {
        std::vector<CurvePoint> samples;
        for (std::size_t x = 8; x <= 256; x += 8)
            samples.push_back({x, static_cast<double>(x)});
        const double brute = oracle::brute_trapezoid(samples);
        CHECK_THAT(brute, Catch::Matchers::WithinAbs(32736.0, 1e-12));
        CHECK_THAT(trapezoid_area(samples, 8), Catch::Matchers::WithinAbs(32736.0, 1e-9));
    }
}

TEST_CASE("trapezoid_area validation") {
    std::vector<CurvePoint> one{{8, 1.0}};
    CHECK_THROWS_AS(trapezoid_area(one, 8), std::invalid_argument);
    std::vector<CurvePoint> uneven{{8, 1.0}, {16, 1.0}, {32, 1.0}};
    CHECK_THROWS_AS(trapezoid_area(uneven, 8), std::invalid_argument);
}

TEST_CASE("trapezoid_area equals brute-force interval sums on random samples") {
    SplitMix64 seeds(0xfeed);
    for (int round = 0; round < 1000; ++round) {
        std::vector<CurvePoint> samples;
        const std::size_t count = 2 + seeds.next_below(40);
        for (std::size_t i = 0; i < count; ++i)
            samples.push_back(
                {8 * (i + 1), static_cast<double>(seeds.next_below(16000)) / 1000.0});
        REQUIRE_THAT(trapezoid_area(samples, 8),
                     Catch::Matchers::WithinAbs(oracle::brute_trapezoid(samples), 1e-9));
    }
}

TEST_CASE("differential_area basics") {
    const ReferenceFragment ref = ReferenceFragment::generate(5);

    SECTION("curve against itself is exactly zero") {
        const DifferentialArea d = differential_area(ref.curve, ref.curve);
        CHECK(d.value == 0.0);
        CHECK(d.length == 256);
    }
    SECTION("all-zero file yields the reference curve's own integral") {
        const auto zeros = constant_buffer(256, 0);
        const EntropyCurve zero_curve = entropy_curve(zeros, 0, 256);
        const DifferentialArea d = differential_area(ref.curve, zero_curve);
        CHECK_THAT(d.value,
                   Catch::Matchers::WithinAbs(trapezoid_area(ref.curve.points, 8), 1e-9));
        CHECK_THAT(d.value, Catch::Matchers::WithinAbs(
                                oracle::naive_differential_area(ref.bytes, zeros, 0, 256), 1e-9));
        CHECK(d.value > 0.0);
    }
    SECTION("mismatched lengths are rejected") {
        const EntropyCurve shorter = ref.curve.prefix(128);
        CHECK_THROWS_AS(differential_area(ref.curve, shorter), std::invalid_argument);
    }
}

TEST_CASE("differential_area antisymmetry and bound") {
    SplitMix64 seeds(0xabcd);
    for (int round = 0; round < 200; ++round) {
        const std::size_t length = 8 * (1 + seeds.next_below(32));
        const auto a = random_buffer(length, seeds.next());
        const auto b = random_buffer(length, seeds.next());
        const EntropyCurve ca = entropy_curve(a, 0, length);
        const EntropyCurve cb = entropy_curve(b, 0, length);
        const double ab = differential_area(ca, cb).value;
        const double ba = differential_area(cb, ca).value;
        REQUIRE_THAT(ab, Catch::Matchers::WithinAbs(-ba, 1e-9));
        REQUIRE(std::abs(ab) <= 8.0 * (static_cast<double>(length) - 8.0) + 1e-9);
        REQUIRE_THAT(differential_area(ca, ca).value, Catch::Matchers::WithinAbs(0.0, 0.0));
    }
}

TEST_CASE("single-point curves integrate over a zero-width window") {
    const auto buf = random_buffer(8, 3);
    const EntropyCurve c = entropy_curve(buf, 0, 8);
    REQUIRE(c.points.size() == 1);
    const ReferenceFragment ref = ReferenceFragment::generate(3);
    CHECK(differential_area(ref.curve.prefix(8), c).value == 0.0);
}

TEST_CASE("reference fragment regeneration is bit-identical") {
    const ReferenceFragment a = ReferenceFragment::generate(1234);
    const ReferenceFragment b = ReferenceFragment::generate(1234);
    const ReferenceFragment c = ReferenceFragment::generate(1235);
    CHECK(a.bytes == b.bytes);
    CHECK(a.bytes != c.bytes);
    REQUIRE(a.curve.points.size() == b.curve.points.size());
    for (std::size_t i = 0; i < a.curve.points.size(); ++i)
        CHECK(a.curve.points[i].entropy == b.curve.points[i].entropy);
}

TEST_CASE("curve prefix truncates on point boundaries") {
    const ReferenceFragment ref = ReferenceFragment::generate(8);
    const EntropyCurve p = ref.curve.prefix(48);
    REQUIRE(p.points.size() == 6);
    CHECK(p.points.back().length == 48);
    for (std::size_t i = 0; i < p.points.size(); ++i)
        CHECK(p.points[i].entropy == ref.curve.points[i].entropy);
}
