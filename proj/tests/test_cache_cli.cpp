#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "epn/cache.hpp"

using namespace epn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("epn-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

struct CmdResult {
    int status = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string tool() { return EPNTOOL_BIN; }

} // namespace

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("hello") == fnv1a64_hex("hello"));
    CHECK(fnv1a64_hex("hello") != fnv1a64_hex("hellp"));
}

TEST_CASE("cache store/load round trip with hash verification") {
    TempDir dir;
    CacheEntry e;
    e.kind = "solutions";
    e.key = {{"N", 4}, {"digits", 30}};
    e.payload = {{"alpha", "1/3"}, {"beta", "tall"}};
    cache_store(dir.path.string(), e);

    auto back = cache_load(dir.path.string(), "solutions", e.key);
    REQUIRE(back.has_value());
    CHECK(back->payload == e.payload);
    CHECK(back->hash == fnv1a64_hex(e.payload.dump()));
    CHECK(!cache_load(dir.path.string(), "solutions", {{"N", 5}}).has_value());

    // Tampering must be detected.
    std::string path = cache_path(dir.path.string(), "solutions", e.key);
    auto doc = nlohmann::json::parse(std::ifstream(path));
    doc["payload"]["alpha"] = "2/3";
    std::ofstream(path, std::ios::trunc) << doc.dump();
    CHECK_THROWS_AS(cache_load(dir.path.string(), "solutions", e.key), structural_error);
}

TEST_CASE("secular and solve payloads round trip bit-exactly") {
    auto out = solve_epn(6, 40);
    auto j1 = to_json(out);
    auto j2 = to_json(solve_from_json(j1));
    CHECK(j1 == j2);
    CHECK(j1.dump() == j2.dump());

    auto sj1 = to_json(out.system);
    auto sj2 = to_json(secular_from_json(sj1));
    CHECK(sj1.dump() == sj2.dump());
}

TEST_CASE("confluence report payload round trips") {
    auto rep = precision_sweep(
        [](int p, long digits) { return split_demo_matrix(4, p, digits); }, 4,
        {10, 20, 30}, 2, 3);
    auto j1 = to_json(rep);
    auto j2 = to_json(confluence_from_json(j1));
    CHECK(j1.dump() == j2.dump());
}

TEST_CASE("reconstructed tuples evaluate identically") {
    auto out = solve_epn(6, 40);
    auto back = solve_from_json(to_json(out));
    for (size_t i = 0; i < out.tuples.size(); ++i) {
        for (const auto& [k, v] : out.tuples[i].values) {
            const auto& w = back.tuples[i].values.at(k);
            CHECK((v.approx - w.approx).is_zero());
        }
    }
}

TEST_CASE("cli: derive prints the canonical system") {
    TempDir dir;
    auto r = run_cmd(tool() + " --cache-dir " + dir.path.string() + " derive 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("P_1 = 1 * z + -1 * A") != std::string::npos);
}

TEST_CASE("cli: exit codes follow the contract") {
    TempDir dir;
    std::string base = tool() + " --cache-dir " + dir.path.string();
    CHECK(run_cmd(base + " derive 1").status == 2);       // usage/input
    CHECK(run_cmd(base + " nonsense").status == 2);       // unknown subcommand
    CHECK(run_cmd(base + " solve 6 --digits 5").status == 2);
    CHECK(run_cmd(base + " solve 10 --method groebner").status == 3);  // budget
    CHECK(run_cmd(base + " verify 6 --tuple nosuch").status == 2);
}

TEST_CASE("cli: warm cache reruns are byte-identical") {
    TempDir dir;
    std::string base = tool() + " --cache-dir " + dir.path.string();
    auto cold = run_cmd(base + " solve 6 --digits 30");
    auto warm = run_cmd(base + " solve 6 --digits 30");
    CHECK(cold.status == 0);
    CHECK(warm.status == 0);
    CHECK(cold.out == warm.out);

    auto v1 = run_cmd(base + " verify 4 --tuple bh --ladder 8,12 --trials 2 --seed 9 --csv -");
    auto v2 = run_cmd(base + " --no-cache verify 4 --tuple bh --ladder 8,12 --trials 2 --seed 9 --csv -");
    CHECK(v1.status == 0);
    CHECK(v2.status == 0);
    CHECK(v1.out == v2.out);  // cache hit reproduces the cold run exactly
}

TEST_CASE("cli: sweep CSV has the documented schema") {
    TempDir dir;
    std::string csv = (dir.path / "sweep.csv").string();
    std::string base = tool() + " --cache-dir " + dir.path.string();
    auto r = run_cmd(base + " sweep 4 --tuple bh --zmin -1 --zmax 1/2 --grid 9 --digits 25 --csv " + csv);
    CHECK(r.status == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "z,re_s_1,im_s_1,re_s_2,im_s_2,class_1,class_2,ambiguous");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows >= 9);
}

TEST_CASE("cli: verify split-demo flags the partition") {
    TempDir dir;
    std::string base = tool() + " --cache-dir " + dir.path.string();
    auto r = run_cmd(base + " verify 6 --tuple split-demo --ladder 10,20,30 --trials 1 --seed 4 --csv " +
                     (dir.path / "v.csv").string());
    CHECK(r.status == 0);
    CHECK(r.out.find("suspected-split(3,3)") != std::string::npos);
    std::ifstream in(dir.path / "v.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "p,trial,min_rho,max_rho");
}

TEST_CASE("cli: boundaries table for the N=7 alpha tuple") {
    TempDir dir;
    std::string base = tool() + " --cache-dir " + dir.path.string();
    auto r = run_cmd(base + " boundaries 7 --tuple alpha --window -50..2 --digits 30");
    CHECK(r.status == 0);
    CHECK(r.out.find("zero-cross") != std::string::npos);
    CHECK(r.out.find("-44.39497") != std::string::npos);
    CHECK(r.out.find("-0.295509") != std::string::npos);
}

TEST_CASE("cli: sweep plot emits an SVG") {
    TempDir dir;
    std::string svg = (dir.path / "plot.svg").string();
    std::string base = tool() + " --cache-dir " + dir.path.string();
    auto r = run_cmd(base + " sweep 4 --tuple bh --zmin -1 --zmax 1/2 --grid 9 --digits 25 --csv " +
                     (dir.path / "s.csv").string() + " --plot " + svg);
    CHECK(r.status == 0);
    std::ifstream in(svg);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("<svg") != std::string::npos);
}
