#include "cli.hpp"

#include "gbdi/analysis.hpp"
#include "gbdi/decoder.hpp"
#include "gbdi/encoder.hpp"
#include "gbdi/errors.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbdi::cli {

namespace fs = std::filesystem;

namespace {

struct io_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bytes read_file(const fs::path &path) {
    std::error_code ec;
    const auto st = fs::status(path, ec);
    if (!fs::exists(st)) throw io_failure("cannot read " + path.string() + ": no such file");
    if (!fs::is_regular_file(st)) throw io_failure("cannot read " + path.string() + ": not a regular file");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_failure("cannot open " + path.string());
    bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw io_failure("error while reading " + path.string());
    return data;
}

void write_file(const fs::path &path, const bytes &data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_failure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw io_failure("error while writing " + path.string());
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void add_config_flags(CLI::App &cmd, Config &cfg) {
    cmd.add_option("--word-size", cfg.word_size, "Bytes per value (4 or 8)")->capture_default_str();
    cmd.add_option("--block-size", cfg.block_size, "Bytes per block")->capture_default_str();
    cmd.add_option("--bases", cfg.k, "Number of global bases (power of two, 2..256)")->capture_default_str();
    cmd.add_option("--sample", cfg.max_sample, "Maximum values sampled for clustering")->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "Clustering seed")->capture_default_str();
    cmd.add_option("--max-iters", cfg.max_iters, "Clustering iteration cap")->capture_default_str();
}

void add_format_flag(CLI::App &cmd, std::string &format) {
    cmd.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"text", "json", "json-like"}))
        ->capture_default_str();
}

bool is_json(const std::string &format) { return format != "text"; }

struct BenchRow {
    std::string name;
    std::optional<AnalysisReport> report;
    std::string error;
};

int cmd_compress(const std::string &in_path, const std::string &out_path, const Config &cfg,
    const std::string &format, std::ostream &out) {
    validate(cfg);
    const bytes data = read_file(in_path);
    const bytes container = compress(data, cfg);
    write_file(out_path, container);
    const double ratio = data.empty() ? 0.0 : compression_ratio(data.size(), container.size());
    if (is_json(format)) {
        nlohmann::ordered_json j;
        j["file"] = in_path;
        j["original_bytes"] = data.size();
        j["compressed_bytes"] = container.size();
        j["ratio"] = ratio;
        out << j.dump() << '\n';
    } else {
        out << "original_bytes " << data.size() << '\n'
            << "compressed_bytes " << container.size() << '\n'
            << "ratio " << fixed4(ratio) << '\n';
    }
    return exit_ok;
}

int cmd_decompress(const std::string &in_path, const std::string &out_path, std::ostream &out) {
    const bytes container = read_file(in_path);
    const bytes data = decompress(container);
    write_file(out_path, data);
    out << "decompressed_bytes " << data.size() << '\n';
    return exit_ok;
}

void print_reports(const std::vector<BenchRow> &rows, const std::string &format, bool with_mean, std::ostream &out) {
    double sum = 0.0;
    std::size_t counted = 0;
    for (const auto &row : rows) {
        if (row.report && !row.report->degenerate) {
            sum += row.report->ratio;
            ++counted;
        }
    }
    const std::optional<double> mean = counted ? std::optional(sum / static_cast<double>(counted)) : std::nullopt;

    if (is_json(format)) {
        nlohmann::ordered_json doc;
        doc["files"] = nlohmann::json::array();
        for (const auto &row : rows) {
            if (row.report) {
                doc["files"].push_back(nlohmann::ordered_json::parse(format_report_json(*row.report)));
            } else {
                doc["files"].push_back({{"file", row.name}, {"error", row.error}});
            }
        }
        if (with_mean) doc["mean_ratio"] = mean ? nlohmann::json(*mean) : nlohmann::json(nullptr);
        out << doc.dump(2) << '\n';
        return;
    }

    out << report_text_heading() << '\n';
    for (const auto &row : rows) {
        if (row.report) {
            out << format_report_text(*row.report) << '\n';
        } else {
            out << row.name << " ERROR " << row.error << '\n';
        }
    }
    if (with_mean) out << "mean " << (mean ? fixed4(*mean) : std::string("n/a")) << " files " << counted << '\n';
}

BenchRow analyze_file(const fs::path &path, const std::string &name, const Config &cfg, Execution exec) {
    BenchRow row{name, std::nullopt, {}};
    try {
        auto report = analyze(read_file(path), cfg, exec);
        report.file = name;
        row.report = std::move(report);
    } catch (const std::exception &e) {
        row.error = e.what();
    }
    return row;
}

int cmd_analyze(const std::vector<std::string> &paths, const Config &cfg, const std::string &format,
    std::ostream &out, std::ostream &err) {
    validate(cfg);
    std::vector<BenchRow> rows;
    for (const auto &p : paths) {
        rows.push_back(analyze_file(p, p, cfg, Execution::parallel));
        if (!rows.back().report) {
            err << "gbdi: " << rows.back().error << '\n';
            return exit_io;
        }
    }
    print_reports(rows, format, paths.size() > 1, out);
    return exit_ok;
}

int cmd_bench(const std::string &dir, const Config &cfg, const std::string &format, std::ostream &out,
    std::ostream &err) {
    validate(cfg);
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw io_failure("cannot open directory " + dir);

    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir, ec)) {
        std::error_code type_ec;
        if (entry.is_regular_file(type_ec)) files.push_back(entry.path());
    }
    if (ec) throw io_failure("cannot list directory " + dir + ": " + ec.message());
    if (files.empty()) {
        err << "gbdi: no regular files in " << dir << '\n';
        return exit_empty_corpus;
    }
    std::sort(files.begin(), files.end(),
        [](const fs::path &a, const fs::path &b) { return a.filename().string() < b.filename().string(); });

    // One worker per file; rows land in name order regardless of scheduling.
    std::vector<BenchRow> rows(files.size());
    const auto n = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto &f = files[static_cast<std::size_t>(i)];
        rows[static_cast<std::size_t>(i)] = analyze_file(f, f.filename().string(), cfg, Execution::serial);
    }

    std::size_t warnings = 0;
    for (const auto &row : rows) {
        if (!row.report) {
            ++warnings;
            err << "gbdi: warning: " << row.name << ": " << row.error << '\n';
        }
    }
    print_reports(rows, format, true, out);
    if (warnings) err << "gbdi: " << warnings << " warning(s)\n";
    return exit_ok;
}

int cmd_synth(const SynthParams &params, const std::string &out_path, std::ostream &out) {
    const bytes data = synth_workload(params);
    write_file(out_path, data);
    out << "wrote " << data.size() << " bytes to " << out_path << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"GBDI global-base delta compression toolkit", "gbdi"};
    app.require_subcommand(1);

    Config cfg;
    std::string format = "text";
    std::string in_path, out_path, dir;
    std::vector<std::string> inputs;
    SynthParams synth;

    auto *compress_cmd = app.add_subcommand("compress", "Compress a file into a GBDI container");
    compress_cmd->add_option("input", in_path, "Input file")->required();
    compress_cmd->add_option("-o,--output", out_path, "Output container")->required();
    add_config_flags(*compress_cmd, cfg);
    add_format_flag(*compress_cmd, format);

    auto *decompress_cmd = app.add_subcommand("decompress", "Restore the original bytes of a container");
    decompress_cmd->add_option("input", in_path, "Input container")->required();
    decompress_cmd->add_option("-o,--output", out_path, "Output file")->required();

    auto *analyze_cmd = app.add_subcommand("analyze", "Report ratio and encoding statistics for files");
    analyze_cmd->add_option("inputs", inputs, "Input files")->required();
    add_config_flags(*analyze_cmd, cfg);
    add_format_flag(*analyze_cmd, format);

    auto *bench_cmd = app.add_subcommand("bench", "Analyze every regular file of a directory");
    bench_cmd->add_option("dir", dir, "Corpus directory")->required();
    add_config_flags(*bench_cmd, cfg);
    add_format_flag(*bench_cmd, format);

    auto *synth_cmd = app.add_subcommand("synth", "Write a synthetic clustered workload");
    synth_cmd->add_option("-o,--output", out_path, "Output file")->required();
    synth_cmd->add_option("--clusters", synth.n_clusters, "Number of cluster centers")->capture_default_str();
    synth_cmd->add_option("--jitter-bits", synth.jitter_bits, "Width of the signed jitter")->capture_default_str();
    synth_cmd->add_option("--outliers", synth.outlier_fraction, "Fraction of full-range words")
        ->capture_default_str();
    synth_cmd->add_option("--size", synth.size, "Output size in bytes")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--word-size", synth.word_size, "Bytes per word")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "gbdi: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (compress_cmd->parsed()) return cmd_compress(in_path, out_path, cfg, format, out);
        if (decompress_cmd->parsed()) return cmd_decompress(in_path, out_path, out);
        if (analyze_cmd->parsed()) return cmd_analyze(inputs, cfg, format, out, err);
        if (bench_cmd->parsed()) return cmd_bench(dir, cfg, format, out, err);
        if (synth_cmd->parsed()) return cmd_synth(synth, out_path, out);
    } catch (const config_error &e) {
        err << "gbdi: invalid configuration: " << e.what() << '\n';
        return exit_usage;
    } catch (const gbdi::domain_error &e) {
        err << "gbdi: invalid parameters: " << e.what() << '\n';
        return exit_usage;
    } catch (const version_error &e) {
        err << "gbdi: " << e.what() << '\n';
        return exit_corrupt;
    } catch (const gbdi::error &e) {
        err << "gbdi: corrupt container: " << e.what() << '\n';
        return exit_corrupt;
    } catch (const io_failure &e) {
        err << "gbdi: " << e.what() << '\n';
        return exit_io;
    }
    return exit_usage;
}

} // namespace gbdi::cli
