#pragma once

#include "gbdi/config.hpp"

#include <array>
#include <cstdint>

namespace gbdi {

inline constexpr std::array<std::uint8_t, 4> container_magic = {'G', 'B', 'D', 'I'};
inline constexpr std::uint8_t container_version = 1;
inline constexpr std::size_t fixed_header_size = 18;

enum class BlockMode : std::uint8_t {
    raw = 0,
    gbdi = 1,
};

/// Bytes before the first block: fixed header, bases and the max-width array.
constexpr std::size_t header_length(const Config &cfg) {
    return fixed_header_size + std::size_t{cfg.k} * cfg.word_size + cfg.k;
}

inline void put_le(bytes &out, std::uint64_t v, unsigned n) {
    for (unsigned i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_le(const std::uint8_t *p, unsigned n) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v |= std::uint64_t{p[i]} << (8 * i);
    return v;
}

} // namespace gbdi
