#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gbdi {

using word_t = std::uint64_t;
using bytes = std::vector<std::uint8_t>;
using byte_view = std::span<const std::uint8_t>;

inline constexpr unsigned max_block_size = 4096;
inline constexpr unsigned min_bases = 2;
inline constexpr unsigned max_bases = 256;

struct Config {
    unsigned word_size = 4;   // bytes per value: 4 or 8
    unsigned block_size = 64; // bytes per block
    unsigned k = 64;          // number of global bases
    std::size_t max_sample = 1u << 20;
    unsigned max_iters = 16;
    std::uint64_t seed = 0;

    std::size_t values_per_block() const { return block_size / word_size; }
    unsigned index_bits() const;
    word_t word_mask() const { return word_size == 8 ? ~word_t{0} : (word_t{1} << (8 * word_size)) - 1; }

    friend bool operator==(const Config &, const Config &) = default;
};

/// Throws config_error if any field is out of range.
void validate(const Config &cfg);

constexpr bool is_power_of_two(unsigned x) { return x != 0 && (x & (x - 1)) == 0; }

} // namespace gbdi
