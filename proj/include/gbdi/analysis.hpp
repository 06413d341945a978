#pragma once

#include "gbdi/config.hpp"
#include "gbdi/encoder.hpp"

#include <array>
#include <string>
#include <vector>

namespace gbdi {

/// Statistics for one input, as produced by analyze().
struct AnalysisReport {
    std::string file;
    std::uint64_t original_bytes = 0;
    std::uint64_t compressed_bytes = 0;
    double ratio = 0.0;
    std::array<std::uint64_t, 4> class_counts{}; // z, d8, d16, out
    std::uint64_t raw_blocks = 0;
    std::vector<std::uint64_t> base_usage;
    bool verified = false;
    bool degenerate = false; // empty input; ratio reported as 0

    friend bool operator==(const AnalysisReport &, const AnalysisReport &) = default;
};

/// original / compressed; throws domain_error when compressed is 0.
double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes);

/// Compresses, decompresses, checks byte equality and collects encoder statistics.
AnalysisReport analyze(byte_view data, const Config &cfg, Execution exec = Execution::parallel);

struct SynthParams {
    unsigned n_clusters = 32;
    unsigned jitter_bits = 10;
    double outlier_fraction = 0.05;
    std::size_t size = 4u << 20;
    std::uint64_t seed = 1;
    unsigned word_size = 4;
};

/// Clustered words: a random center plus uniform signed jitter of jitter_bits
/// bits, with outlier_fraction of the words replaced by full-range values.
bytes synth_workload(const SynthParams &params);

/// One whitespace-separated line:
/// file original compressed ratio z d8 d16 out raw_blocks verified
std::string format_report_text(const AnalysisReport &r);
std::string report_text_heading();

/// Machine-readable object with keys file, original_bytes, compressed_bytes,
/// ratio, z, d8, d16, out, raw_blocks, verified.
std::string format_report_json(const AnalysisReport &r);
AnalysisReport parse_report_json(const std::string &text);

} // namespace gbdi
