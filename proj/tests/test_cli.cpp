#include "doctest.h"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/graphml.hpp>
#include <boost/graph/graphviz.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psl2lab/cache.hpp"
#include "psl2lab/cli.hpp"
#include "psl2lab/config.hpp"
#include "psl2lab/errors.hpp"
#include "psl2lab/export.hpp"

using namespace psl2lab;
using namespace psl2lab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("psl2lab-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::set<std::pair<int, int>> edge_set(const gengraph::GeneratingGraph& g) {
    std::set<std::pair<int, int>> s;
    for (const auto& [a, b] : g.edges()) s.insert({static_cast<int>(a), static_cast<int>(b)});
    return s;
}

struct Vertex {
    std::string name;
    int index = -1;
};
using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, Vertex>;

template <class Key>
std::set<std::pair<int, int>> boost_edges(const BGraph& bg, Key key) {
    std::set<std::pair<int, int>> s;
    for (auto [it, end] = boost::edges(bg); it != end; ++it) {
        int a = key(bg[boost::source(*it, bg)]), b = key(bg[boost::target(*it, bg)]);
        if (a > b) std::swap(a, b);
        s.insert({a, b});
    }
    return s;
}

}  // namespace

TEST_CASE("config file keys and precedence") {
    RunConfig cfg;
    apply_config_text(cfg, "# comment\n\nseed = 42\ngraph-cap=500\nformat = graphml\nmode = closure\ncache = off\n");
    CHECK(cfg.seed == 42);
    CHECK(cfg.graph_cap == 500);
    CHECK(cfg.format == Format::GraphML);
    CHECK(cfg.mode == psl2::GenMode::Closure);
    CHECK_FALSE(cfg.use_cache);
    CHECK_THROWS_AS(apply_config_text(cfg, "colour = blue\n"), UsageError);
    CHECK_THROWS_AS(apply_config_text(cfg, "seed = -3\n"), UsageError);
    CHECK_THROWS_AS(apply_config_text(cfg, "seed\n"), UsageError);
    CHECK_THROWS_AS(apply_config_text(cfg, "format = png\n"), UsageError);
    RunConfig zero;
    zero.graph_cap = 0;
    CHECK_THROWS_AS(zero.validate(), UsageError);

    TempDir dir;
    const auto file = dir.path / "run.conf";
    std::ofstream(file) << "seed = 9\ncache-dir = " << (dir.path / "from-file").string() << "\n";
    ::setenv(kCacheDirEnv, (dir.path / "from-env").string().c_str(), 1);
    // env beats the file, the flag beats both
    auto r = run({"--config", file.string(), "cache", "clear"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["seed"] == 9);
    CHECK(j["cache_dir"] == (dir.path / "from-env").string());
    r = run({"--config", file.string(), "--seed", "11", "--cache-dir", (dir.path / "flag").string(), "cache", "clear"});
    j = json::parse(r.out);
    CHECK(j["seed"] == 11);
    CHECK(j["cache_dir"] == (dir.path / "flag").string());
    ::unsetenv(kCacheDirEnv);
}

TEST_CASE("cache roundtrip, version miss and corruption") {
    TempDir dir;
    std::ostringstream warn;
    const Cache cache(dir.path, &warn);
    const auto G = psl2::GroupIndex::enumerate(7);
    const psl2::GenerationTest test(G);
    bool hit = true;
    const auto built = cached_graph(&cache, test, 100000, 2000, 1, &hit);
    CHECK_FALSE(hit);
    const auto loaded = cached_graph(&cache, test, 100000, 2000, 1, &hit);
    CHECK(hit);
    CHECK(loaded.words() == built.words());

    const CacheKey key{"graph", 7, 100000, 2000};
    CHECK(cache.load(key).has_value());
    CHECK_FALSE(cache.load(key, "0.0.0-other").has_value());
    CHECK(fs::exists(cache.path_for(key)));  // a stale entry is ignored, not deleted
    // another cap is another key
    CHECK_FALSE(cache.load(CacheKey{"graph", 7, 100000, 3000}).has_value());

    // the header is one line, the payload is little-endian words
    {
        std::ifstream in(cache.path_for(key), std::ios::binary);
        std::string line;
        std::getline(in, line);
        const auto h = json::parse(line);
        CHECK(h["q"] == 7);
        CHECK(h["count"] == 168);
        CHECK(h["row_stride"] == 3);
        CHECK(h["version"] == kArtifactVersion);
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t w = 0;
        for (int i = 0; i < 8; ++i) w |= std::uint64_t{b[i]} << (8 * i);
        CHECK(w == built.words()[0]);
    }

    // flip one payload byte
    {
        std::fstream f(cache.path_for(key), std::ios::in | std::ios::out | std::ios::binary);
        std::string line;
        std::getline(f, line);
        const auto pos = f.tellg() + std::streamoff(40);
        f.seekg(pos);
        char c = 0;
        f.read(&c, 1);
        f.seekp(pos);
        c = static_cast<char>(c ^ 0x10);
        f.write(&c, 1);
    }
    const auto recomputed = cached_graph(&cache, test, 100000, 2000, 1, &hit);
    CHECK_FALSE(hit);
    CHECK(recomputed.words() == built.words());
    CHECK(warn.str().find("corrupt") != std::string::npos);
    cached_graph(&cache, test, 100000, 2000, 1, &hit);
    CHECK(hit);  // overwritten with a good entry

    // truncated and garbage files
    warn.str("");
    {
        std::ofstream(cache.path_for(key), std::ios::trunc) << "{\"kind\":\"graph\"";
    }
    cached_graph(&cache, test, 100000, 2000, 1, &hit);
    CHECK_FALSE(hit);
    CHECK(warn.str().find("corrupt") != std::string::npos);

    // group enumerations roundtrip too
    const auto g1 = cached_group(&cache, 9, 100000, &hit);
    CHECK_FALSE(hit);
    const auto g2 = cached_group(&cache, 9, 100000, &hit);
    CHECK(hit);
    CHECK(std::ranges::equal(g1.elements(), g2.elements()));
    CHECK(g2.order() == 360);

    CHECK(cache.clear() == 2);
    CHECK(cache.clear() == 0);
}

TEST_CASE("DOT and GraphML re-parse to the same edge set") {
    const auto G = psl2::GroupIndex::enumerate(7);
    const psl2::GenerationTest test(G);
    const auto g = gengraph::GeneratingGraph::build(test);
    const auto expected = edge_set(g);
    const json meta{{"seed", 1}};

    std::stringstream dot;
    write_dot(dot, g, meta);
    BGraph bd;
    boost::dynamic_properties dpd(boost::ignore_other_properties);
    dpd.property("node_id", boost::get(&Vertex::name, bd));
    REQUIRE(boost::read_graphviz(dot, bd, dpd, "node_id"));
    CHECK(boost::num_vertices(bd) == 167);
    CHECK(boost_edges(bd, [](const Vertex& v) { return std::stoi(v.name); }) == expected);

    std::stringstream ml;
    write_graphml(ml, g, meta);
    BGraph bm;
    boost::dynamic_properties dpm(boost::ignore_other_properties);
    dpm.property("index", boost::get(&Vertex::index, bm));
    boost::read_graphml(ml, bm, dpm);
    CHECK(boost::num_vertices(bm) == 167);
    CHECK(boost_edges(bm, [](const Vertex& v) { return v.index; }) == expected);

    const auto j = adjacency_json(g, meta);
    CHECK(j["vertex_count"] == 167);
    CHECK(j["edge_count"] == expected.size());
    std::set<std::pair<int, int>> from_json;
    std::pair<int, int> prev{-1, -1};
    for (const auto& e : j["edges"]) {
        const std::pair<int, int> cur{e[0], e[1]};
        CHECK(cur.first < cur.second);
        CHECK(prev < cur);
        prev = cur;
        from_json.insert(cur);
    }
    CHECK(from_json == expected);

    std::stringstream csv;
    write_csv(csv, g, meta);
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("# ", 0) == 0);
    std::getline(csv, line);
    CHECK(line == "source,target");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == expected.size());
}

TEST_CASE("dispatch exit codes and outputs") {
    TempDir dir;
    const std::string cd = (dir.path / "cache").string();

    auto r = run({"verify", "theorem-a", "--p", "2"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("odd prime") != std::string::npos);

    r = run({"--cache-dir", cd, "graph", "export", "--q", "7", "--format", "dot"});
    CHECK(r.code == kExitOk);
    std::size_t nodes = 0;
    for (std::size_t pos = 0; (pos = r.out.find("[label=", pos)) != std::string::npos; ++pos) ++nodes;
    CHECK(nodes == 167);
    CHECK(r.out.find("artifact_version") != std::string::npos);

    r = run({"--cache-dir", cd, "verify", "geometric", "--q", "5"});
    CHECK(r.code == kExitOk);
    auto v = json::parse(r.out);
    for (const char* k : {"claim_id", "params", "status", "evidence", "seed", "runtime_ms", "artifact_version"})
        CHECK(v.contains(k));
    CHECK(v["status"] == "verified");
    CHECK(v["evidence"]["size_with_identity"] == 130);

    r = run({"verify", "geometric", "--q", "3"});
    CHECK(r.code == kExitUsage);

    r = run({"--cache-dir", cd, "graph", "build", "--q", "29"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("required 12180, configured 2000") != std::string::npos);

    r = run({"--cache-dir", cd, "coclique", "check", "--q", "7", "--members", "1,2"});
    CHECK(r.code == kExitRefuted);
    CHECK(json::parse(r.out)["verified"]["pairwise"] == false);

    r = run({"--unknown-flag", "group", "build", "--q", "7"});
    CHECK(r.code == kExitUsage);
    r = run({"group", "frobnicate"});
    CHECK(r.code == kExitUsage);
    r = run({});
    CHECK(r.code == kExitUsage);
    r = run({"--help"});
    CHECK(r.code == kExitOk);

    r = run({"--cache-dir", cd, "group", "build", "--q", "11"});
    CHECK(r.code == kExitOk);
    auto g = json::parse(r.out);
    CHECK(g["order"] == 660);
    CHECK(g["involutions"] == 55);
    CHECK(g["seed"] == 1);

    // an extension is certified by its own pass and re-checks from its report
    r = run({"--cache-dir", cd, "--no-cache", "coclique", "extend", "--q", "7", "--members", "1"});
    REQUIRE(r.code == kExitOk);
    const auto ext = json::parse(r.out);
    CHECK(ext["verified"]["maximal"] == true);
    const auto report_file = dir.path / "ext.json";
    std::ofstream(report_file) << ext.dump();
    r = run({"--cache-dir", cd, "coclique", "check", "--q", "7", "--members-file", report_file.string()});
    CHECK(r.code == kExitOk);
    CHECK(json::parse(r.out)["size"] == ext["size"]);

    // -o writes to a file
    const auto out_file = dir.path / "graph.csv";
    r = run({"--cache-dir", cd, "--format", "csv", "-o", out_file.string(), "graph", "export", "--q", "5"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(out_file);
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# ", 0) == 0);

    r = run({"geom", "census", "--q", "5"});
    CHECK(r.code == kExitOk);
    CHECK(json::parse(r.out)["census"] == json{{"minus", 10}, {"plus", 15}, {"degenerate", 6}, {"total", 31}});

    r = run({"--cache-dir", cd, "verify", "geometric", "--q", "5", "--budget", "100"});
    CHECK(r.code == kExitBudget);
    CHECK(json::parse(r.out)["status"] == "inconclusive-budget");
}
