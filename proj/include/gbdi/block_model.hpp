#pragma once

#include "gbdi/config.hpp"

#include <vector>

namespace gbdi {

/// The n = block_size / word_size little-endian words of one block.
using ValueBlock = std::vector<word_t>;

struct SplitResult {
    std::vector<ValueBlock> blocks;
    bytes residual;
};

/// Splits data into full blocks plus a residual shorter than one block.
SplitResult split_into_blocks(byte_view data, const Config &cfg);

bytes serialize_block(std::span<const word_t> block, const Config &cfg);

/// Appends the little-endian encoding of a block to out.
void append_block(std::span<const word_t> block, unsigned word_size, bytes &out);

/// All words of all full blocks as one flat sequence (no residual).
std::vector<word_t> extract_values(byte_view data, const Config &cfg);

inline word_t load_word(const std::uint8_t *p, unsigned word_size) {
    word_t v = 0;
    for (unsigned i = 0; i < word_size; ++i) {
        v |= word_t{p[i]} << (8 * i);
    }
    return v;
}

inline void store_word(std::uint8_t *p, word_t v, unsigned word_size) {
    for (unsigned i = 0; i < word_size; ++i) {
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

} // namespace gbdi
