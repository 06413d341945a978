#include "gbdi/analysis.hpp"
#include "gbdi/block_model.hpp"
#include "gbdi/decoder.hpp"
#include "gbdi/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <random>

namespace gbdi {

double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
    if (compressed_bytes == 0) throw domain_error("compression ratio undefined for a zero compressed size");
    return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

AnalysisReport analyze(byte_view data, const Config &cfg, Execution exec) {
    EncodeStats stats;
    const bytes container = compress(data, cfg, &stats, exec);
    const bytes restored = decompress(container);

    AnalysisReport r;
    r.original_bytes = data.size();
    r.compressed_bytes = container.size();
    r.degenerate = data.empty();
    r.ratio = r.degenerate ? 0.0 : compression_ratio(r.original_bytes, r.compressed_bytes);
    r.class_counts = stats.class_counts;
    r.raw_blocks = stats.raw_blocks;
    r.base_usage = stats.base_usage;
    r.base_usage.resize(cfg.k, 0);
    r.verified = std::equal(restored.begin(), restored.end(), data.begin(), data.end());
    return r;
}

bytes synth_workload(const SynthParams &p) {
    if (p.word_size != 4 && p.word_size != 8) throw domain_error("word size must be 4 or 8");
    if (p.n_clusters == 0) throw domain_error("at least one cluster is required");
    if (p.jitter_bits > 8 * p.word_size) throw domain_error("jitter wider than a word");
    if (!(p.outlier_fraction >= 0.0 && p.outlier_fraction <= 1.0)) {
        throw domain_error("outlier fraction must lie in [0, 1]");
    }
    if (p.size % p.word_size != 0) throw domain_error("size must be a multiple of the word size");

    const unsigned bits = 8 * p.word_size;
    const word_t mask = bits == 64 ? ~word_t{0} : (word_t{1} << bits) - 1;
    std::mt19937_64 rng(p.seed);
    std::vector<word_t> centers(p.n_clusters);
    for (auto &c : centers) c = rng() & mask;

    // Jitter is uniform over [-2^(b-1), 2^(b-1)).
    const word_t jitter_span = p.jitter_bits == 0 ? 1 : p.jitter_bits >= 64 ? 0 : word_t{1} << p.jitter_bits;
    const word_t jitter_offset = p.jitter_bits == 0 ? 0 : jitter_span == 0 ? word_t{1} << 63 : jitter_span / 2;

    bytes out(p.size);
    const std::size_t words = p.size / p.word_size;
    for (std::size_t i = 0; i < words; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        word_t v;
        if (u < p.outlier_fraction) {
            v = rng() & mask;
        } else {
            const word_t center = centers[rng() % centers.size()];
            const word_t j = jitter_span == 0 ? rng() : rng() % jitter_span;
            v = (center + j - jitter_offset) & mask;
        }
        store_word(out.data() + i * p.word_size, v, p.word_size);
    }
    return out;
}

std::string report_text_heading() {
    return "file original_bytes compressed_bytes ratio z d8 d16 out raw_blocks verified";
}

std::string format_report_text(const AnalysisReport &r) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio);
    return r.file + ' ' + std::to_string(r.original_bytes) + ' ' + std::to_string(r.compressed_bytes) + ' ' + ratio
        + ' ' + std::to_string(r.class_counts[0]) + ' ' + std::to_string(r.class_counts[1]) + ' '
        + std::to_string(r.class_counts[2]) + ' ' + std::to_string(r.class_counts[3]) + ' '
        + std::to_string(r.raw_blocks) + ' ' + (r.verified ? "yes" : "no");
}

namespace {

nlohmann::ordered_json to_json(const AnalysisReport &r) {
    nlohmann::ordered_json j;
    j["file"] = r.file;
    j["original_bytes"] = r.original_bytes;
    j["compressed_bytes"] = r.compressed_bytes;
    j["ratio"] = r.ratio;
    j["z"] = r.class_counts[0];
    j["d8"] = r.class_counts[1];
    j["d16"] = r.class_counts[2];
    j["out"] = r.class_counts[3];
    j["raw_blocks"] = r.raw_blocks;
    j["verified"] = r.verified;
    return j;
}

} // namespace

std::string format_report_json(const AnalysisReport &r) { return to_json(r).dump(); }

AnalysisReport parse_report_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    AnalysisReport r;
    r.file = j.at("file").get<std::string>();
    r.original_bytes = j.at("original_bytes").get<std::uint64_t>();
    r.compressed_bytes = j.at("compressed_bytes").get<std::uint64_t>();
    r.ratio = j.at("ratio").get<double>();
    r.class_counts = {j.at("z").get<std::uint64_t>(), j.at("d8").get<std::uint64_t>(),
        j.at("d16").get<std::uint64_t>(), j.at("out").get<std::uint64_t>()};
    r.raw_blocks = j.at("raw_blocks").get<std::uint64_t>();
    r.verified = j.at("verified").get<bool>();
    r.degenerate = r.original_bytes == 0;
    return r;
}

} // namespace gbdi
