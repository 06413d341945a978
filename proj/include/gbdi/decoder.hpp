#pragma once

#include "gbdi/block_model.hpp"
#include "gbdi/config.hpp"
#include "gbdi/container.hpp"
#include "gbdi/global_bases.hpp"

namespace gbdi {

struct ContainerHeader {
    Config config; // word_size, block_size and k from the container, the rest defaulted
    std::uint64_t original_length = 0;
    BaseTable table;
    std::size_t stream_offset = 0;
};

/// Parses and validates the header and global tables.
ContainerHeader decode_header(byte_view data);

/// Decodes one block whose payload starts at stream[offset]; advances offset past it.
/// Only the encoder's own output is accepted: every value must use the base and
/// class the encoder picks for it, padding must be zero, and RAW blocks must be
/// ones the encoder could not pack.
ValueBlock decode_block(byte_view stream, std::size_t &offset, std::uint8_t mode, const BaseTable &table,
    const Config &cfg);
ValueBlock decode_block(byte_view stream, std::size_t &offset, std::uint8_t mode, const BaseTable &table,
    const BaseLookup &lookup, const Config &cfg);

bytes decompress(byte_view container);

} // namespace gbdi
