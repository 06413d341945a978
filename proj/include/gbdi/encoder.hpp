#pragma once

#include "gbdi/config.hpp"
#include "gbdi/container.hpp"
#include "gbdi/global_bases.hpp"

#include <array>
#include <vector>

namespace gbdi {

struct EncodedBlock {
    BlockMode mode = BlockMode::raw;
    bytes payload;
};

/// Encoder decisions for a run of blocks.
struct EncodeStats {
    std::array<std::uint64_t, 4> class_counts{}; // indexed by SizeClass
    std::uint64_t raw_blocks = 0;
    std::vector<std::uint64_t> base_usage;

    void merge(const EncodeStats &o);
    friend bool operator==(const EncodeStats &, const EncodeStats &) = default;
};

/// Bits used by one value in the GBDI stream.
constexpr unsigned value_cost_bits(SizeClass c, unsigned index_bits, unsigned word_size) {
    return c == SizeClass::outlier ? 2 + 8 * word_size : 2 + index_bits + delta_bits(c);
}

/// Bits of the GBDI stream for block (before byte padding).
std::size_t gbdi_bits(std::span<const word_t> block, const BaseTable &table, const Config &cfg);
std::size_t gbdi_bits(std::span<const word_t> block, const BaseLookup &lookup, const Config &cfg);

/// Encodes one full block, falling back to RAW when packing would not shrink it.
/// stats, when given, receives the decisions of this block (counted only for GBDI mode).
EncodedBlock encode_block(std::span<const word_t> block, const BaseTable &table, const Config &cfg,
    EncodeStats *stats = nullptr);
/// Same, with a prebuilt lookup for a table of k bases.
EncodedBlock encode_block(std::span<const word_t> block, const BaseLookup &lookup, std::size_t k, const Config &cfg,
    EncodeStats *stats = nullptr);

enum class Execution {
    serial,
    parallel,
};

/// Encodes every block of values (a multiple of values_per_block) and appends
/// mode byte + payload for each, in block order, to out. The parallel path is
/// byte-identical to the serial one; threads <= 0 uses the OpenMP default.
void encode_blocks(std::span<const word_t> values, const BaseTable &table, const Config &cfg, bytes &out,
    EncodeStats *stats = nullptr, Execution exec = Execution::parallel, int threads = 0);

/// Serialized header, base table and max-width array.
bytes encode_header(const Config &cfg, const BaseTable &table, std::uint64_t original_length);

/// Full pipeline: blocks, sampling, clustering, block encoding, residual.
bytes compress(byte_view data, const Config &cfg, EncodeStats *stats = nullptr,
    Execution exec = Execution::parallel, int threads = 0);

/// Base table compress() would build for data.
BaseTable build_base_table(byte_view data, const Config &cfg);

} // namespace gbdi
