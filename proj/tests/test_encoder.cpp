#include "gbdi/bit_stream.hpp"
#include "gbdi/block_model.hpp"
#include "gbdi/decoder.hpp"
#include "gbdi/encoder.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace gbdi;

namespace {

bytes random_bytes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    bytes out(n);
    for (auto &b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

BaseTable table_with(std::vector<word_t> bases, std::uint8_t width) {
    BaseTable t;
    t.max_widths.assign(bases.size(), width);
    t.bases = std::move(bases);
    return t;
}

} // namespace

TEST_CASE("classify_delta") {
    CHECK(classify_delta(0) == SizeClass::zero);
    CHECK(classify_delta(-3) == SizeClass::d8);
    CHECK(classify_delta(-128) == SizeClass::d8);
    CHECK(classify_delta(127) == SizeClass::d8);
    CHECK(classify_delta(128) == SizeClass::d16);
    CHECK(classify_delta(300) == SizeClass::d16);
    CHECK(classify_delta(-32768) == SizeClass::d16);
    CHECK(classify_delta(32768) == SizeClass::outlier);
    CHECK(classify_delta(40000) == SizeClass::outlier);
    CHECK(classify_delta(INT64_MIN) == SizeClass::outlier);
}

TEST_CASE("encode_block: all-zero block is 16 bytes of payload") {
    std::vector<word_t> bases(64);
    for (unsigned i = 0; i < 64; ++i) bases[i] = i * 1000;
    const auto t = table_with(bases, 0);
    const ValueBlock zeros(16, 0);
    const auto e = encode_block(zeros, t, Config{});
    CHECK(e.mode == BlockMode::gbdi);
    CHECK(e.payload.size() == 16); // 16 x (2 + 6) bits
    const auto d = oracle::decode_payload(e.payload, 16, t, 4);
    CHECK(d.values == zeros);
    CHECK(d.bits == 128);
}

TEST_CASE("encode_block: values equal to bases cost the same as zeros") {
    std::vector<word_t> bases(64);
    for (unsigned i = 0; i < 64; ++i) bases[i] = 0x10000000u + i * 77777u;
    const auto t = table_with(bases, 16);
    ValueBlock block(16);
    for (unsigned i = 0; i < 16; ++i) block[i] = bases[(i * 5) % 64];
    const auto e = encode_block(block, t, Config{});
    CHECK(e.mode == BlockMode::gbdi);
    CHECK(e.payload.size() == 16);
    CHECK(oracle::decode_payload(e.payload, 16, t, 4).values == block);
}

TEST_CASE("encode_block: noise falls back to raw") {
    const auto t = table_with({0, 1u << 31}, 16);
    const auto data = random_bytes(64, 1);
    const auto block = split_into_blocks(data, Config{}).blocks.at(0);
    const auto e = encode_block(block, t, Config{});
    CHECK(e.mode == BlockMode::raw);
    CHECK(e.payload == data); // 16 x 34 bits = 68 bytes >= 64
}

TEST_CASE("encode_block: golden bit layout") {
    Config c;
    c.block_size = 16;
    c.k = 2;
    const auto t = table_with({100, 1000}, 16);
    const ValueBlock block{100, 103, 1300, 0xDEADBEEF};
    EncodeStats stats;
    const auto e = encode_block(block, t, c, &stats);
    REQUIRE(e.mode == BlockMode::gbdi);
    // Z(0) | D8(0,-3) | D16(1,-300) | OUT(0xDEADBEEF), 67 bits, MSB first.
    CHECK(e.payload == bytes{0x0B, 0xF6, 0xFF, 0x6A, 0x7B, 0xD5, 0xB7, 0xDD, 0xE0});
    CHECK(stats.class_counts == std::array<std::uint64_t, 4>{1, 1, 1, 1});
    CHECK(stats.base_usage == std::vector<std::uint64_t>{2, 1});
}

TEST_CASE("encode_block: raw fallback threshold") {
    Config c;
    c.block_size = 8;
    c.word_size = 4;
    c.k = 2;
    const auto t = table_with({1000, 5000}, 16);
    const ValueBlock block{1300, 4700};
    // 2 x 19 = 38 bits -> 5 bytes < 8: GBDI
    CHECK(encode_block(block, t, c).mode == BlockMode::gbdi);
    const ValueBlock far{0x80000000u, 0x90000000u};
    // 2 x 34 = 68 bits -> 9 bytes >= 8: RAW
    CHECK(encode_block(far, t, c).mode == BlockMode::raw);
}

TEST_CASE("property: encoded bit length equals the exhaustive minimum") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 3000; ++trial) {
        Config c;
        c.word_size = trial % 3 == 0 ? 8 : 4;
        const unsigned n = 1 + static_cast<unsigned>(rng() % 4);
        c.block_size = n * c.word_size;
        c.k = 1u << (rng() % 3); // 1, 2 or 4
        const word_t mask = c.word_mask();
        const word_t anchor = rng() & mask;
        BaseTable t;
        for (unsigned i = 0; i < c.k; ++i) {
            t.bases.push_back(rng() % 4 == 0 ? rng() & mask : (anchor + rng() % 600) & mask);
            const std::uint8_t widths[] = {0, 8, 16};
            t.max_widths.push_back(widths[rng() % 3]);
        }
        ValueBlock block(n);
        for (auto &v : block) v = rng() % 5 == 0 ? rng() & mask : (anchor + rng() % 600) & mask;

        const auto e = encode_block(block, t, c);
        const std::size_t best = oracle::min_block_bits(block, t, c.word_size);
        if ((best + 7) / 8 >= c.block_size) {
            CHECK(e.mode == BlockMode::raw);
            continue;
        }
        REQUIRE(e.mode == BlockMode::gbdi);
        const auto d = oracle::decode_payload(e.payload, n, t, c.word_size);
        CHECK(d.bits == best);
        CHECK(d.values == block);
    }
}

TEST_CASE("compress: container arithmetic") {
    SUBCASE("empty input") {
        const auto z = compress({}, Config{});
        CHECK(z.size() == 338);
        CHECK(header_length(Config{}) == 338);
        CHECK(decompress(z).empty());
    }
    SUBCASE("1 MiB of zeros") {
        const bytes zeros(1 << 20, 0);
        const auto z = compress(zeros, Config{});
        CHECK(z.size() == 16384 * 17 + 338);
        CHECK(z.size() == 278866);
    }
    SUBCASE("1 MiB of random bytes") {
        const auto data = random_bytes(1 << 20, 77);
        EncodeStats stats;
        const auto z = compress(data, Config{}, &stats);
        CHECK(z.size() <= 1065298);
        // Bases are sample values, so a rare block holding two of them packs.
        CHECK(stats.raw_blocks >= 16380);
    }
    SUBCASE("header layout") {
        Config c;
        c.word_size = 8;
        c.block_size = 256;
        c.k = 4;
        const auto z = compress(bytes(1000, 0x11), c);
        REQUIRE(z.size() >= 18 + 4 * 8 + 4);
        CHECK(bytes(z.begin(), z.begin() + 4) == bytes{'G', 'B', 'D', 'I'});
        CHECK(z[4] == 1);
        CHECK(z[5] == 8);
        CHECK(z[6] == 0x00);
        CHECK(z[7] == 0x01);
        CHECK(z[8] == 4);
        CHECK(z[9] == 0);
        CHECK(get_le(&z[10], 8) == 1000);
        // the residual (1000 mod 256 = 232 bytes) ends the container verbatim
        CHECK(bytes(z.end() - 232, z.end()) == bytes(232, 0x11));
    }
}

TEST_CASE("property: compressed size bound") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        Config c;
        c.word_size = trial % 2 ? 8 : 4;
        c.block_size = trial % 4 < 2 ? 64 : 512;
        const auto data = random_bytes(rng() % 50000, trial);
        const auto z = compress(data, c);
        const std::size_t blocks = data.size() / c.block_size;
        CHECK(z.size() <= header_length(c) + blocks * (c.block_size + 1) + data.size() % c.block_size);
    }
}

TEST_CASE("property: block encode/decode inverse") {
    std::mt19937_64 rng(4321);
    for (int trial = 0; trial < 10000; ++trial) {
        Config c;
        c.word_size = trial % 2 ? 8 : 4;
        c.k = 1u << (1 + rng() % 8);
        c.block_size = c.word_size * static_cast<unsigned>(1 + rng() % 32);
        const word_t mask = c.word_mask();
        const word_t anchor = rng() & mask;
        BaseTable t;
        for (unsigned i = 0; i < c.k; ++i) {
            t.bases.push_back((anchor + rng() % 100000) & mask);
            const std::uint8_t widths[] = {0, 8, 16};
            t.max_widths.push_back(widths[rng() % 3]);
        }
        ValueBlock block(c.values_per_block());
        for (auto &v : block) {
            const auto r = rng() % 4;
            v = r == 0 ? rng() & mask : r == 1 ? t.bases[rng() % c.k] : (anchor + rng() % 100000) & mask;
        }
        const auto e = encode_block(block, t, c);
        std::size_t offset = 0;
        const auto back = decode_block(e.payload, offset, static_cast<std::uint8_t>(e.mode), t, c);
        REQUIRE(back == block);
        CHECK(offset == e.payload.size());
    }
}

TEST_CASE("parallel block encoding is byte-identical to the serial kernel") {
    bytes data = random_bytes(1 << 18, 5);
    // Mix in compressible runs so both modes appear.
    for (std::size_t i = 0; i < data.size() / 2; ++i) data[i] = static_cast<std::uint8_t>(i % 4 == 0 ? i / 64 : 0);
    for (const Config &c : {Config{}, Config{8, 128}}) {
        EncodeStats ref_stats;
        const auto ref = compress(data, c, &ref_stats, Execution::serial);
        for (int threads : {1, 2, 3, 8}) {
            EncodeStats stats;
            CHECK(compress(data, c, &stats, Execution::parallel, threads) == ref);
            CHECK(stats == ref_stats);
        }
        CHECK(ref_stats.raw_blocks > 0);
        CHECK(ref_stats.class_counts[0] > 0);
    }
}

TEST_CASE("property: bit writer matches a bit-string packer and reads back") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        bytes out;
        BitWriter w(out);
        std::string bits;
        std::vector<std::pair<std::uint64_t, unsigned>> fields;
        const int n = static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            const unsigned width = static_cast<unsigned>(rng() % 65);
            const std::uint64_t v = width == 64 ? rng() : rng() & ((std::uint64_t{1} << width) - 1);
            w.put(v | (width < 64 ? rng() << width : 0), width); // bits above width are ignored
            for (unsigned b = width; b-- > 0;) bits.push_back(((v >> b) & 1) ? '1' : '0');
            fields.emplace_back(v, width);
        }
        while (bits.size() % 8) bits.push_back('0');
        REQUIRE(out.size() * 8 == bits.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i] == std::stoul(bits.substr(8 * i, 8), nullptr, 2));
        }
        BitReader r(out);
        for (const auto &[v, width] : fields) {
            std::uint64_t got = 0;
            REQUIRE(r.get(width, got));
            CHECK(got == v);
        }
        CHECK(r.padding_is_zero());
        std::uint64_t extra = 0;
        CHECK_FALSE(r.get(static_cast<unsigned>(out.size() * 8 - r.bit_position() + 1), extra));
    }
}
