#include "gbdi/config.hpp"
#include "gbdi/errors.hpp"

#include <bit>
#include <string>

namespace gbdi {

unsigned Config::index_bits() const {
    return static_cast<unsigned>(std::countr_zero(k));
}

void validate(const Config &cfg) {
    if (cfg.word_size != 4 && cfg.word_size != 8) {
        throw config_error("word size must be 4 or 8, got " + std::to_string(cfg.word_size));
    }
    if (cfg.block_size < cfg.word_size || cfg.block_size > max_block_size) {
        throw config_error("block size must be in [" + std::to_string(cfg.word_size) + ", "
            + std::to_string(max_block_size) + "], got " + std::to_string(cfg.block_size));
    }
    if (cfg.block_size % cfg.word_size != 0) {
        throw config_error("block size " + std::to_string(cfg.block_size) + " is not a multiple of word size "
            + std::to_string(cfg.word_size));
    }
    if (!is_power_of_two(cfg.k) || cfg.k < min_bases || cfg.k > max_bases) {
        throw config_error("base count must be a power of two in [2, 256], got " + std::to_string(cfg.k));
    }
    if (cfg.max_sample == 0) {
        throw config_error("sample size must be at least 1");
    }
}

} // namespace gbdi
