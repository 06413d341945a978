#include "cli.hpp"
#include "gbdi/analysis.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace gbdi;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gbdi_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

void write(const std::string &path, const bytes &data) {
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size()));
}

bytes read(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    return bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("cli: compress and decompress") {
    TempDir dir;
    write(dir / "zeros", bytes(1 << 20, 0));
    auto r = run({"compress", dir / "zeros", "-o", dir / "z.gbdi"});
    CHECK(r.code == 0);
    CHECK(r.out.find("compressed_bytes 278866") != std::string::npos);
    CHECK(r.out.find("ratio 3.7601") != std::string::npos);

    r = run({"decompress", dir / "z.gbdi", "-o", dir / "back"});
    CHECK(r.code == 0);
    CHECK(read(dir / "back") == bytes(1 << 20, 0));

    SynthParams p;
    p.size = 100003 / 4 * 4;
    auto d = synth_workload(p);
    d.push_back(7);
    write(dir / "odd", d);
    CHECK(run({"compress", dir / "odd", "-o", dir / "o.gbdi", "--word-size", "8", "--block-size", "128", "--bases",
              "16", "--seed", "5", "--sample", "1000", "--max-iters", "4"})
              .code == 0);
    CHECK(run({"decompress", dir / "o.gbdi", "-o", dir / "o.back"}).code == 0);
    CHECK(read(dir / "o.back") == d);

    r = run({"compress", dir / "zeros", "-o", dir / "j.gbdi", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("compressed_bytes") == 278866);
}

TEST_CASE("cli: exit codes") {
    TempDir dir;
    write(dir / "zeros", bytes(4096, 0));
    CHECK(run({"compress", dir / "missing", "-o", dir / "x"}).code == cli::exit_io);
    CHECK(run({"compress", dir / "zeros", "-o", dir / "x", "--bases", "100"}).code == cli::exit_usage);
    CHECK(run({"compress", dir / "zeros", "-o", dir / "x", "--block-size", "30"}).code == cli::exit_usage);
    CHECK(run({"compress", dir / "zeros", "-o", (dir.path / "no" / "such" / "dir").string()}).code == cli::exit_io);
    CHECK(run({}).code == cli::exit_usage);
    CHECK(run({"frobnicate"}).code == cli::exit_usage);
    CHECK(run({"compress", dir / "zeros"}).code == cli::exit_usage);
    CHECK(run({"compress", "--help"}).code == 0);

    write(dir / "garbage", bytes{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20});
    CHECK(run({"decompress", dir / "garbage", "-o", dir / "x"}).code == cli::exit_corrupt);

    REQUIRE(run({"compress", dir / "zeros", "-o", dir / "z.gbdi"}).code == 0);
    auto z = read(dir / "z.gbdi");
    z[4] = 9;
    write(dir / "v9.gbdi", z);
    const auto r = run({"decompress", dir / "v9.gbdi", "-o", dir / "x"});
    CHECK(r.code == cli::exit_corrupt);
    CHECK(r.err.find("version") != std::string::npos);

    z = read(dir / "z.gbdi");
    z.resize(z.size() - 3);
    write(dir / "short.gbdi", z);
    CHECK(run({"decompress", dir / "short.gbdi", "-o", dir / "x"}).code == cli::exit_corrupt);

    CHECK(run({"synth", "-o", dir / "s", "--size", "10"}).code == cli::exit_usage);
}

TEST_CASE("cli: bench") {
    TempDir dir;
    fs::create_directories(dir.path / "corpus");
    fs::create_directories(dir.path / "empty");
    const std::string corpus = dir / "corpus";

    SynthParams p;
    p.size = 1 << 16;
    std::vector<double> ratios;
    for (unsigned i = 0; i < 3; ++i) {
        p.jitter_bits = 4 * i;
        p.seed = i;
        const auto d = synth_workload(p);
        write((dir.path / "corpus" / ("f" + std::to_string(i))).string(), d);
        ratios.push_back(analyze(d, Config{}).ratio);
    }
    fs::create_directories(dir.path / "corpus" / "subdir"); // not a regular file, skipped

    auto r = run({"bench", corpus, "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("files").size() == 3);
    for (unsigned i = 0; i < 3; ++i) {
        const auto report = parse_report_json(doc["files"][i].dump());
        CHECK(report.file == "f" + std::to_string(i));
        CHECK(report.ratio == ratios[i]);
        CHECK(report.verified);
    }
    CHECK(doc.at("mean_ratio").get<double>() == doctest::Approx((ratios[0] + ratios[1] + ratios[2]) / 3));

    r = run({"bench", corpus});
    CHECK(r.code == 0);
    CHECK(r.out.find("mean ") != std::string::npos);
    CHECK(r.out == run({"bench", corpus}).out);

    CHECK(run({"bench", dir / "empty"}).code == cli::exit_empty_corpus);
    CHECK(run({"bench", dir / "nonexistent"}).code == cli::exit_io);

    fs::create_directories(dir.path / "one");
    write((dir.path / "one" / "zeros").string(), bytes(1 << 16, 0));
    r = run({"bench", dir / "one"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mean 3.6930") != std::string::npos);
}

TEST_CASE("cli: bench keeps going past unreadable files") {
    TempDir dir;
    write(dir / "a", bytes(4096, 0));
    write(dir / "b", bytes(4096, 1));
    fs::permissions(dir.path / "b", fs::perms::none);
    std::ifstream probe(dir / "b");
    if (probe) {
        MESSAGE("running with privileges that ignore file permissions; skipping");
        return;
    }
    const auto r = run({"bench", dir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("b ERROR") != std::string::npos);
    CHECK(r.err.find("1 warning") != std::string::npos);
}

TEST_CASE("cli: analyze and synth") {
    TempDir dir;
    auto r = run({"synth", "-o", dir / "s", "--clusters", "8", "--jitter-bits", "6", "--outliers", "0", "--size",
        "65536", "--seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(read(dir / "s").size() == 65536);
    r = run({"analyze", dir / "s", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["files"][0]["verified"] == true);
    CHECK(doc["files"][0]["out"] == 0);
    CHECK(run({"analyze", dir / "missing"}).code == cli::exit_io);
}
