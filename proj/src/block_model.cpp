#include "gbdi/block_model.hpp"

namespace gbdi {

SplitResult split_into_blocks(byte_view data, const Config &cfg) {
    validate(cfg);
    const std::size_t n_blocks = data.size() / cfg.block_size;
    const std::size_t n = cfg.values_per_block();

    SplitResult result;
    result.blocks.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::uint8_t *p = data.data() + b * cfg.block_size;
        ValueBlock block(n);
        for (std::size_t i = 0; i < n; ++i) {
            block[i] = load_word(p + i * cfg.word_size, cfg.word_size);
        }
        result.blocks.push_back(std::move(block));
    }
    const auto tail = data.subspan(n_blocks * cfg.block_size);
    result.residual.assign(tail.begin(), tail.end());
    return result;
}

void append_block(std::span<const word_t> block, unsigned word_size, bytes &out) {
    const std::size_t at = out.size();
    out.resize(at + block.size() * word_size);
    for (std::size_t i = 0; i < block.size(); ++i) {
        store_word(out.data() + at + i * word_size, block[i], word_size);
    }
}

bytes serialize_block(std::span<const word_t> block, const Config &cfg) {
    bytes out;
    out.reserve(cfg.block_size);
    append_block(block, cfg.word_size, out);
    return out;
}

std::vector<word_t> extract_values(byte_view data, const Config &cfg) {
    validate(cfg);
    const std::size_t count = data.size() / cfg.block_size * cfg.values_per_block();
    std::vector<word_t> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = load_word(data.data() + i * cfg.word_size, cfg.word_size);
    }
    return values;
}

} // namespace gbdi
