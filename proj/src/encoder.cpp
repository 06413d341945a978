#include "gbdi/encoder.hpp"
#include "gbdi/bit_stream.hpp"
#include "gbdi/block_model.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbdi {

void EncodeStats::merge(const EncodeStats &o) {
    for (std::size_t i = 0; i < class_counts.size(); ++i) class_counts[i] += o.class_counts[i];
    raw_blocks += o.raw_blocks;
    if (base_usage.size() < o.base_usage.size()) base_usage.resize(o.base_usage.size(), 0);
    for (std::size_t i = 0; i < o.base_usage.size(); ++i) base_usage[i] += o.base_usage[i];
}

std::size_t gbdi_bits(std::span<const word_t> block, const BaseLookup &lookup, const Config &cfg) {
    std::size_t bits = 0;
    for (const word_t v : block) {
        const auto pick = lookup(v);
        bits += value_cost_bits(pick ? pick->size_class : SizeClass::outlier, cfg.index_bits(), cfg.word_size);
    }
    return bits;
}

std::size_t gbdi_bits(std::span<const word_t> block, const BaseTable &table, const Config &cfg) {
    return gbdi_bits(block, BaseLookup(table, cfg.word_size), cfg);
}

EncodedBlock encode_block(std::span<const word_t> block, const BaseTable &table, const Config &cfg,
    EncodeStats *stats) {
    return encode_block(block, BaseLookup(table, cfg.word_size), table.size(), cfg, stats);
}

EncodedBlock encode_block(std::span<const word_t> block, const BaseLookup &lookup, std::size_t k, const Config &cfg,
    EncodeStats *stats) {
    const unsigned index_bits = cfg.index_bits();
    std::vector<std::optional<DeltaAssignment>> picks(block.size());
    std::size_t total_bits = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        picks[i] = lookup(block[i]);
        const SizeClass c = picks[i] ? picks[i]->size_class : SizeClass::outlier;
        total_bits += value_cost_bits(c, index_bits, cfg.word_size);
    }

    EncodedBlock out;
    if ((total_bits + 7) / 8 >= cfg.block_size) {
        out.mode = BlockMode::raw;
        out.payload.reserve(cfg.block_size);
        append_block(block, cfg.word_size, out.payload);
        if (stats) ++stats->raw_blocks;
        return out;
    }

    out.mode = BlockMode::gbdi;
    out.payload.reserve((total_bits + 7) / 8);
    BitWriter writer(out.payload);
    for (std::size_t i = 0; i < block.size(); ++i) {
        const auto &pick = picks[i];
        const SizeClass c = pick ? pick->size_class : SizeClass::outlier;
        writer.put(static_cast<unsigned>(c), 2);
        if (!pick) {
            writer.put(block[i], 8 * cfg.word_size);
        } else {
            writer.put(pick->base_index, index_bits);
            const unsigned width = delta_bits(c);
            if (width) writer.put(static_cast<std::uint64_t>(pick->delta), width); // put() keeps the low bits
        }
        if (stats) {
            ++stats->class_counts[static_cast<unsigned>(c)];
            if (pick) {
                if (stats->base_usage.size() < k) stats->base_usage.resize(k, 0);
                ++stats->base_usage[pick->base_index];
            }
        }
    }
    return out;
}

namespace {

void append_encoded(const EncodedBlock &block, bytes &out) {
    out.push_back(static_cast<std::uint8_t>(block.mode));
    out.insert(out.end(), block.payload.begin(), block.payload.end());
}

// Reference kernel: one block at a time, straight into the output.
void encode_blocks_serial(std::span<const word_t> values, const BaseTable &table, const Config &cfg, bytes &out,
    EncodeStats *stats) {
    const std::size_t n = cfg.values_per_block();
    const BaseLookup lookup(table, cfg.word_size);
    for (std::size_t at = 0; at < values.size(); at += n) {
        append_encoded(encode_block(values.subspan(at, n), lookup, table.size(), cfg, stats), out);
    }
}

void encode_blocks_parallel(std::span<const word_t> values, const BaseTable &table, const Config &cfg, bytes &out,
    EncodeStats *stats, int threads) {
    const std::size_t n = cfg.values_per_block();
    const auto n_blocks = static_cast<std::ptrdiff_t>(values.size() / n);
    std::vector<EncodedBlock> encoded(static_cast<std::size_t>(n_blocks));
    EncodeStats total;
    const BaseLookup lookup(table, cfg.word_size);

#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
#endif
    {
        EncodeStats local;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
            const auto ub = static_cast<std::size_t>(b);
            encoded[ub] = encode_block(values.subspan(ub * n, n), lookup, table.size(), cfg, stats ? &local : nullptr);
        }
#ifdef _OPENMP
#pragma omp critical(gbdi_encode_stats)
#endif
        total.merge(local);
    }
    (void)threads;

    std::size_t size = 0;
    for (const auto &e : encoded) size += 1 + e.payload.size();
    out.reserve(out.size() + size);
    for (const auto &e : encoded) append_encoded(e, out);
    if (stats) stats->merge(total);
}

} // namespace

void encode_blocks(std::span<const word_t> values, const BaseTable &table, const Config &cfg, bytes &out,
    EncodeStats *stats, Execution exec, int threads) {
    if (stats && stats->base_usage.size() < table.size()) stats->base_usage.resize(table.size(), 0);
    if (exec == Execution::serial) {
        encode_blocks_serial(values, table, cfg, out, stats);
    } else {
        encode_blocks_parallel(values, table, cfg, out, stats, threads);
    }
}

bytes encode_header(const Config &cfg, const BaseTable &table, std::uint64_t original_length) {
    bytes out;
    out.reserve(header_length(cfg));
    out.insert(out.end(), container_magic.begin(), container_magic.end());
    out.push_back(container_version);
    out.push_back(static_cast<std::uint8_t>(cfg.word_size));
    put_le(out, cfg.block_size, 2);
    put_le(out, cfg.k, 2);
    put_le(out, original_length, 8);
    for (const word_t b : table.bases) put_le(out, b, cfg.word_size);
    out.insert(out.end(), table.max_widths.begin(), table.max_widths.end());
    return out;
}

BaseTable build_base_table(byte_view data, const Config &cfg) {
    validate(cfg);
    const auto values = extract_values(data, cfg);
    return kmeans_global_bases(sample_values(values, cfg.max_sample, cfg.seed), cfg);
}

bytes compress(byte_view data, const Config &cfg, EncodeStats *stats, Execution exec, int threads) {
    validate(cfg);
    const auto values = extract_values(data, cfg);
    const BaseTable table = kmeans_global_bases(sample_values(values, cfg.max_sample, cfg.seed), cfg);

    bytes out = encode_header(cfg, table, data.size());
    out.reserve(out.size() + data.size() + data.size() / cfg.block_size + 1);
    encode_blocks(values, table, cfg, out, stats, exec, threads);
    const auto residual = data.subspan(data.size() / cfg.block_size * cfg.block_size);
    out.insert(out.end(), residual.begin(), residual.end());
    return out;
}

} // namespace gbdi
