#include "gbdi/decoder.hpp"
#include "gbdi/bit_stream.hpp"
#include "gbdi/encoder.hpp"
#include "gbdi/errors.hpp"

#include <algorithm>
#include <string>

namespace gbdi {

ContainerHeader decode_header(byte_view data) {
    if (data.size() < container_magic.size()) throw truncation_error("container shorter than its magic");
    if (!std::equal(container_magic.begin(), container_magic.end(), data.begin())) {
        throw format_error("not a GBDI container (bad magic)");
    }
    if (data.size() < fixed_header_size) {
        throw truncation_error("container truncated inside the header (" + std::to_string(data.size())
            + " of " + std::to_string(fixed_header_size) + " bytes)");
    }
    if (data[4] != container_version) {
        throw version_error("unsupported container version " + std::to_string(data[4]));
    }

    ContainerHeader h;
    h.config.word_size = data[5];
    h.config.block_size = static_cast<unsigned>(get_le(&data[6], 2));
    h.config.k = static_cast<unsigned>(get_le(&data[8], 2));
    h.original_length = get_le(&data[10], 8);
    try {
        validate(h.config);
    } catch (const config_error &e) {
        throw corruption_error(std::string("invalid container parameters: ") + e.what());
    }

    const std::size_t tables = header_length(h.config);
    if (data.size() < tables) throw truncation_error("container truncated inside the base table");

    const unsigned k = h.config.k;
    const unsigned w = h.config.word_size;
    h.table.bases.resize(k);
    h.table.max_widths.resize(k);
    for (unsigned i = 0; i < k; ++i) {
        h.table.bases[i] = get_le(&data[fixed_header_size + std::size_t{i} * w], w);
    }
    for (unsigned i = 0; i < k; ++i) {
        const std::uint8_t width = data[fixed_header_size + std::size_t{k} * w + i];
        if (width != 0 && width != 8 && width != 16) {
            throw corruption_error("invalid maximum delta width " + std::to_string(width));
        }
        h.table.max_widths[i] = width;
    }
    h.stream_offset = tables;
    return h;
}

ValueBlock decode_block(byte_view stream, std::size_t &offset, std::uint8_t mode, const BaseTable &table,
    const Config &cfg) {
    return decode_block(stream, offset, mode, table, BaseLookup(table, cfg.word_size), cfg);
}

ValueBlock decode_block(byte_view stream, std::size_t &offset, std::uint8_t mode, const BaseTable &table,
    const BaseLookup &lookup, const Config &cfg) {
    const std::size_t n = cfg.values_per_block();
    const auto rest = stream.subspan(std::min(offset, stream.size()));
    ValueBlock block(n);

    if (mode == static_cast<std::uint8_t>(BlockMode::raw)) {
        if (rest.size() < cfg.block_size) throw truncation_error("stream ends inside a raw block");
        for (std::size_t i = 0; i < n; ++i) block[i] = load_word(rest.data() + i * cfg.word_size, cfg.word_size);
        if ((gbdi_bits(block, lookup, cfg) + 7) / 8 < cfg.block_size) {
            throw corruption_error("raw block that the encoder would have packed");
        }
        offset += cfg.block_size;
        return block;
    }
    if (mode != static_cast<std::uint8_t>(BlockMode::gbdi)) {
        throw corruption_error("invalid block mode byte " + std::to_string(mode));
    }

    const unsigned bits = 8 * cfg.word_size;
    const unsigned index_bits = cfg.index_bits();
    const word_t mask = cfg.word_mask();
    BitReader reader(rest);
    auto take = [&](unsigned width) {
        std::uint64_t v = 0;
        if (!reader.get(width, v)) throw truncation_error("stream ends inside a GBDI block");
        return v;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<SizeClass>(take(2));
        if (c == SizeClass::outlier) {
            block[i] = take(bits);
            if (lookup(block[i])) {
                throw corruption_error("outlier that a base can represent");
            }
            continue;
        }
        const auto index = static_cast<unsigned>(take(index_bits));
        if (index >= table.size()) throw corruption_error("base index out of range");
        const unsigned width = delta_bits(c);
        std::int64_t delta = 0;
        if (width) {
            const std::uint64_t raw = take(width);
            const std::uint64_t sign = std::uint64_t{1} << (width - 1);
            delta = static_cast<std::int64_t>((raw ^ sign) - sign);
        }
        if (width > table.max_widths[index] || classify_delta(delta) != c) {
            throw corruption_error("non-canonical delta in GBDI block");
        }
        block[i] = (table.bases[index] - static_cast<word_t>(delta)) & mask;
        const auto pick = lookup(block[i]);
        if (!pick || pick->base_index != index || pick->size_class != c) {
            throw corruption_error("base choice differs from the encoder's");
        }
    }

    if (reader.bytes_consumed() >= cfg.block_size) {
        throw corruption_error("GBDI payload not smaller than a raw block");
    }
    if (!reader.padding_is_zero()) throw corruption_error("nonzero padding in GBDI block");
    offset += reader.bytes_consumed();
    return block;
}

bytes decompress(byte_view container) {
    const ContainerHeader h = decode_header(container);
    const Config &cfg = h.config;
    const std::uint64_t n_blocks = h.original_length / cfg.block_size;
    const std::uint64_t residual = h.original_length % cfg.block_size;

    // Every block costs at least its mode byte plus the all-zero-class payload.
    const std::uint64_t min_block = 1 + (cfg.values_per_block() * (2 + cfg.index_bits()) + 7) / 8;
    const std::uint64_t available = container.size() - h.stream_offset;
    if (n_blocks > available / min_block || n_blocks * min_block + residual > available) {
        throw truncation_error("container too short for its declared length of "
            + std::to_string(h.original_length) + " bytes");
    }

    bytes out;
    out.reserve(static_cast<std::size_t>(h.original_length));
    std::size_t offset = h.stream_offset;
    const BaseLookup lookup(h.table, cfg.word_size);
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        if (offset >= container.size()) throw truncation_error("stream ends before block mode byte");
        const std::uint8_t mode = container[offset++];
        const ValueBlock block = decode_block(container, offset, mode, h.table, lookup, cfg);
        append_block(block, cfg.word_size, out);
    }

    const std::size_t left = container.size() - offset;
    if (left < residual) throw truncation_error("container truncated inside the residual bytes");
    if (left > residual) throw corruption_error("trailing bytes after the residual");
    out.insert(out.end(), container.begin() + static_cast<std::ptrdiff_t>(offset), container.end());
    return out;
}

} // namespace gbdi
