#include "psl2lab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "psl2lab/cache.hpp"
#include "psl2lab/config.hpp"
#include "psl2lab/errors.hpp"
#include "psl2lab/export.hpp"
#include "psl2lab/gengraph.hpp"
#include "psl2lab/maxsub.hpp"
#include "psl2lab/ortho4.hpp"
#include "psl2lab/report.hpp"
#include "psl2lab/verify.hpp"

namespace psl2lab::cli {

using nlohmann::json;
using psl2::GroupIndex;
using psl2::Index;

namespace {

// Flags as parsed; a flag only overrides the config when it was given.
struct Flags {
    std::string config;
    std::string cache_dir;
    std::string format;
    std::string mode;
    std::string output;
    std::uint64_t enumeration_cap = 0, graph_cap = 0, closure_cap = 0, seed = 0, budget = 0;
    unsigned threads = 0;
    bool no_cache = false;
};

struct Args {
    std::uint64_t q = 0;
    std::uint32_t p = 0;
    std::uint64_t trials = 100;
    std::uint64_t seeds = 200;
    std::uint64_t pairs = 1000;
    std::uint32_t min_order = 3;
    std::string members;
    std::string members_file;
    bool shuffle = false;
    bool pairwise_only = false;
    bool certify = false;
};

std::vector<Index> parse_members(const Args& a) {
    std::vector<Index> out;
    if (!a.members_file.empty()) {
        std::ifstream in(a.members_file);
        if (!in) throw UsageError("cannot read members file " + a.members_file);
        json j;
        try {
            j = json::parse(in);
            if (j.is_object()) j = j.at("members");
            for (const auto& m : j) out.push_back(m.is_object() ? m.at("index").get<Index>() : m.get<Index>());
        } catch (const json::exception& e) {
            throw UsageError("members file: " + std::string(e.what()));
        }
    }
    std::stringstream ss(a.members);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || used == 0) throw UsageError("members: '" + tok + "' is not an element index");
        out.push_back(static_cast<Index>(v));
    }
    if (out.empty()) throw UsageError("no members given (--members or --members-file)");
    return out;
}

verify::Options options_of(const RunConfig& cfg) {
    verify::Options o;
    o.enumeration_cap = cfg.enumeration_cap;
    o.graph_cap = cfg.graph_cap;
    o.closure_cap_override = cfg.closure_cap_override;
    o.mode = cfg.mode;
    o.threads = cfg.threads;
    o.seed = cfg.seed;
    o.budget = cfg.budget;
    return o;
}

// Group, generation test and (when under the graph cap) the graph, via the cache.
struct Workspace {
    std::unique_ptr<Cache> cache;
    std::optional<GroupIndex> G;
    std::optional<psl2::GenerationTest> test;
    std::optional<gengraph::GeneratingGraph> graph;
    bool group_hit = false, graph_hit = false;

    Workspace(const RunConfig& cfg, std::ostream& err) {
        if (cfg.use_cache) cache = std::make_unique<Cache>(cfg.cache_dir, &err);
    }
    void load(std::uint64_t q, const RunConfig& cfg, bool want_graph) {
        G.emplace(cached_group(cache.get(), q, cfg.enumeration_cap, &group_hit));
        test.emplace(*G, cfg.mode, cfg.closure_cap_override);
        if (want_graph && G->order() <= cfg.graph_cap)
            graph.emplace(cached_graph(cache.get(), *test, cfg.enumeration_cap, cfg.graph_cap, cfg.threads, &graph_hit));
    }
    gengraph::EdgeOracle edge() const { return graph ? gengraph::EdgeOracle(*graph) : gengraph::EdgeOracle(*test); }
    json cache_json() const {
        if (!cache) return "off";
        json j{{"group", group_hit ? "hit" : "miss"}};
        if (graph) j["graph"] = graph_hit ? "hit" : "miss";
        return j;
    }
};

class Runner {
  public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv);

  private:
    RunConfig resolve(const CLI::App& app) const;
    std::ostream& sink();
    json meta(const json& params) const {
        return {{"params", params}, {"seed", cfg_.seed}, {"artifact_version", kArtifactVersion}};
    }
    int emit(json body, const json& params, int code) {
        body["params"] = params;
        body["seed"] = cfg_.seed;
        body["artifact_version"] = kArtifactVersion;
        sink() << body.dump(1) << '\n';
        return code;
    }
    int emit_verdict(const verify::Verdict& v) {
        sink() << v.to_json().dump(1) << '\n';
        return verify::exit_code(v.status);
    }

    int group_build();
    int graph_build();
    int graph_export();
    int coclique_check();
    int coclique_extend();
    int coclique_search();
    int geom_build();
    int geom_census();
    int cache_clear();

    json base_params(const char* command) const {
        json p{{"command", command}, {"config", cfg_.to_json()}};
        if (args_.q) p["q"] = args_.q;
        if (args_.p) p["p"] = args_.p;
        return p;
    }

    std::ostream& out_;
    std::ostream& err_;
    std::unique_ptr<std::ofstream> file_;
    Flags flags_;
    Args args_;
    RunConfig cfg_;
};

std::ostream& Runner::sink() {
    if (flags_.output.empty()) return out_;
    if (!file_) {
        file_ = std::make_unique<std::ofstream>(flags_.output, std::ios::trunc);
        if (!*file_) throw UsageError("cannot write " + flags_.output);
    }
    return *file_;
}

RunConfig Runner::resolve(const CLI::App& app) const {
    RunConfig cfg;
    if (!flags_.config.empty()) apply_config_file(cfg, flags_.config);
    apply_environment(cfg);
    auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
    if (given("--cache-dir")) cfg.cache_dir = flags_.cache_dir;
    if (given("--format")) cfg.format = format_from_string(flags_.format);
    if (given("--mode")) cfg.mode = mode_from_string(flags_.mode);
    if (given("--enumeration-cap")) cfg.enumeration_cap = flags_.enumeration_cap;
    if (given("--graph-cap")) cfg.graph_cap = flags_.graph_cap;
    if (given("--closure-cap")) cfg.closure_cap_override = flags_.closure_cap;
    if (given("--seed")) cfg.seed = flags_.seed;
    if (given("--budget")) cfg.budget = flags_.budget;
    if (given("--threads")) cfg.threads = flags_.threads;
    if (flags_.no_cache) cfg.use_cache = false;
    cfg.validate();
    return cfg;
}

int Runner::group_build() {
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, false);
    const auto& G = *ws.G;
    std::map<std::string, std::uint64_t> orders;
    for (Index i = 0; i < G.order(); ++i) ++orders[std::to_string(G.order_of(i))];
    json body{{"group", report::group_name(G)},
              {"order", G.order()},
              {"involutions", G.involutions().size()},
              {"element_orders", orders},
              {"max_proper_subgroup_order", G.max_proper_subgroup_order()},
              {"cache", ws.cache_json()}};
    try {
        json kinds = json::array();
        for (const auto& k : maxsub::catalogue(G))
            kinds.push_back({{"kind", maxsub::to_string(k.tag)},
                             {"classes", k.class_count},
                             {"order", maxsub::theoretical_order(k.tag, G.q())}});
        body["maximal_subgroups"] = std::move(kinds);
    } catch (const UsageError& e) {
        body["maximal_subgroups"] = std::string("unavailable: ") + e.what();
    }
    return emit(std::move(body), base_params("group build"), kExitOk);
}

int Runner::graph_build() {
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, true);
    if (!ws.graph) throw CapExceeded("generating graph of PSL_2(" + std::to_string(args_.q) + ")", ws.G->order(), cfg_.graph_cap);
    const auto& g = *ws.graph;
    std::size_t lo = g.vertex_count(), hi = 0;
    for (Index i = 0; i < ws.G->order(); ++i) {
        if (i == ws.G->identity()) continue;
        lo = std::min(lo, g.degree(i));
        hi = std::max(hi, g.degree(i));
    }
    json body{{"group", report::group_name(*ws.G)}, {"vertex_count", g.vertex_count()}, {"edge_count", g.edge_count()},
              {"min_degree", lo},   {"max_degree", hi}, {"cache", ws.cache_json()}};
    return emit(std::move(body), base_params("graph build"), kExitOk);
}

int Runner::graph_export() {
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, true);
    if (!ws.graph) throw CapExceeded("generating graph of PSL_2(" + std::to_string(args_.q) + ")", ws.G->order(), cfg_.graph_cap);
    auto params = base_params("graph export");
    params["format"] = to_string(cfg_.format);
    write_graph(sink(), *ws.graph, cfg_.format, meta(params));
    return kExitOk;
}

int Runner::coclique_check() {
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, true);
    const auto& G = *ws.G;
    const auto edge = ws.edge();
    gengraph::Coclique C;
    C.members = gengraph::normalize_members(G, parse_members(args_));
    json extra = json::object();
    int code = kExitOk;
    if (const auto bad = gengraph::generating_pair(edge, C.members)) {
        extra["generating_pair"] = {bad->first, bad->second};
        code = kExitRefuted;
    } else {
        C.verified_pairwise = true;
        if (!args_.pairwise_only) {
            const auto m = gengraph::check_maximal(edge, C.members, cfg_.threads, cfg_.budget);
            extra["maximality_tests"] = m.tests;
            if (m.budget_exhausted) {
                extra["maximal"] = "budget exhausted";
                code = kExitBudget;
            } else if (m.maximal) {
                C.verified_maximal = true;
                C.witness_log = m.witnesses;
                extra["witnesses"] = m.witnesses.size();
            } else {
                extra["extending_element"] = *m.extending;
                code = kExitRefuted;
            }
        }
    }
    json body = report::coclique_report(G, C, gengraph::classify(G, C.members).label);
    body.update(extra);
    body["cache"] = ws.cache_json();
    auto params = base_params("coclique check");
    params["pairwise_only"] = args_.pairwise_only;
    return emit(std::move(body), params, code);
}

int Runner::coclique_extend() {
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, true);
    const auto& G = *ws.G;
    const auto start = gengraph::normalize_members(G, parse_members(args_));
    const auto C = gengraph::extend_to_maximal(ws.edge(), start,
                                               args_.shuffle ? std::optional<std::uint64_t>(cfg_.seed) : std::nullopt);
    json body = report::coclique_report(G, C, gengraph::classify(G, C.members).label);
    body["start"] = start;
    body["cache"] = ws.cache_json();
    auto params = base_params("coclique extend");
    params["shuffle"] = args_.shuffle;
    return emit(std::move(body), params, kExitOk);
}

int Runner::coclique_search() {
    if (args_.trials == 0) throw UsageError("--trials must be positive");
    Workspace ws(cfg_, err_);
    ws.load(args_.q, cfg_, true);
    const auto& G = *ws.G;
    const std::uint32_t min_order = args_.min_order;
    const auto found = gengraph::search_cocliques(ws.edge(), args_.trials, cfg_.seed,
                                                  [&](Index i) { return G.order_of(i) >= min_order; });
    std::map<std::string, std::uint64_t> outcomes;
    json results = json::array();
    std::size_t best = 0;
    for (const auto& C : found) {
        const auto label = gengraph::classify(G, C.members).label;
        ++outcomes[label + " size " + std::to_string(C.size_with_identity())];
        results.push_back({{"size_with_identity", C.size_with_identity()}, {"classification", label}, {"members", C.members}});
        best = std::max(best, C.size_with_identity());
    }
    json body{{"group", report::group_name(G)}, {"trials", args_.trials}, {"largest_size_with_identity", best},
              {"outcomes", outcomes},          {"results", results},      {"cache", ws.cache_json()}};
    auto params = base_params("coclique search");
    params["trials"] = args_.trials;
    params["min_order"] = min_order;
    return emit(std::move(body), params, kExitOk);
}

int Runner::geom_build() {
    if (args_.q > 0xffffffffu) throw UsageError("q out of range");
    const auto iso = ortho4::KLIsomorphism::build(static_cast<std::uint32_t>(args_.q), cfg_.enumeration_cap);
    const auto C = ortho4::build_geometric_coclique(iso);
    bool pairwise = false, maximal = false;
    json extra = json::object();
    int code = kExitOk;
    if (args_.certify) {
        psl2::GenerationTest test(iso.group(), cfg_.mode, cfg_.closure_cap_override);
        const gengraph::EdgeOracle edge(test);
        pairwise = gengraph::is_coclique(edge, C.members);
        if (!pairwise) code = kExitRefuted;
        if (pairwise && !args_.pairwise_only) {
            const auto m = gengraph::check_maximal(edge, C.members, cfg_.threads, cfg_.budget);
            maximal = m.maximal;
            if (m.budget_exhausted) code = kExitBudget;
            else if (!m.maximal) code = kExitRefuted;
        }
    }
    json body = report::geometric_report(iso, C, pairwise, maximal);
    body["certified"] = args_.certify;
    auto params = base_params("geom build");
    params["certify"] = args_.certify;
    params["pairwise_only"] = args_.pairwise_only;
    return emit(std::move(body), params, code);
}

int Runner::geom_census() {
    if (args_.q > 0xffffffffu) throw UsageError("q out of range");
    const auto S = ortho4::QuadSpace::build_minus(static_cast<std::uint32_t>(args_.q));
    const auto v = ortho4::canonical_v(S.field());
    const auto c = ortho4::census_2spaces(S, ortho4::v_perp(S, v));
    const std::uint64_t q = args_.q;
    json body{{"q", q},
              {"singular_vectors", S.singular_count()},
              {"minus_type", S.is_minus_type()},
              {"v", {v[0].code, v[1].code, v[2].code, v[3].code}},
              {"census", {{"minus", c.minus}, {"plus", c.plus}, {"degenerate", c.degenerate}, {"total", c.total()}}},
              {"expected", {{"minus", q * (q - 1) / 2}, {"plus", q * (q + 1) / 2}, {"degenerate", q + 1}, {"total", q * q + q + 1}}}};
    return emit(std::move(body), base_params("geom census"), kExitOk);
}

int Runner::cache_clear() {
    const Cache cache(cfg_.cache_dir, &err_);
    const auto n = cache.clear();
    return emit({{"cache_dir", cfg_.cache_dir.string()}, {"removed", n}}, base_params("cache clear"), kExitOk);
}

int Runner::run(int argc, const char* const* argv) {
    CLI::App app{"Generating graphs and maximal cocliques of PSL_2(q)", "psl2lab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", flags_.config, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--cache-dir", flags_.cache_dir, std::string("cache directory (env ") + kCacheDirEnv + ")");
    app.add_flag("--no-cache", flags_.no_cache, "neither read nor write the cache");
    app.add_option("--format", flags_.format, "graph export format: json, dot, graphml, csv");
    app.add_option("--mode", flags_.mode, "generation test: trace or closure");
    app.add_option("--enumeration-cap", flags_.enumeration_cap, "largest group to enumerate");
    app.add_option("--graph-cap", flags_.graph_cap, "largest group whose graph is materialised");
    app.add_option("--closure-cap", flags_.closure_cap, "closure cap override, 0 = automatic");
    app.add_option("--seed", flags_.seed, "random seed");
    app.add_option("--budget", flags_.budget, "edge-query budget for maximality, 0 = unlimited");
    app.add_option("--threads", flags_.threads, "worker threads");
    app.add_option("-o,--output", flags_.output, "write the result to a file instead of stdout");

    std::function<int()> action;
    auto bind = [&](CLI::App* sub, int (Runner::*fn)()) { sub->callback([&action, this, fn] { action = [this, fn] { return (this->*fn)(); }; }); };
    auto add_q = [&](CLI::App* sub) { sub->add_option("--q", args_.q, "field order")->required(); };
    auto add_p = [&](CLI::App* sub) { sub->add_option("--p", args_.p, "odd prime")->required(); };
    auto add_members = [&](CLI::App* sub) {
        sub->add_option("--members", args_.members, "comma-separated element indices");
        sub->add_option("--members-file", args_.members_file, "JSON array of indices or a coclique report");
    };

    auto* group = app.add_subcommand("group", "group enumeration")->require_subcommand(1);
    auto* group_build = group->add_subcommand("build", "enumerate PSL_2(q) and summarise it");
    add_q(group_build);
    bind(group_build, &Runner::group_build);

    auto* graph = app.add_subcommand("graph", "generating graph")->require_subcommand(1);
    auto* graph_build = graph->add_subcommand("build", "build (or load) the generating graph");
    add_q(graph_build);
    bind(graph_build, &Runner::graph_build);
    auto* graph_export = graph->add_subcommand("export", "write the generating graph");
    add_q(graph_export);
    bind(graph_export, &Runner::graph_export);

    auto* coclique = app.add_subcommand("coclique", "cocliques of the generating graph")->require_subcommand(1);
    auto* check = coclique->add_subcommand("check", "certify a set as a (maximal) coclique");
    add_q(check);
    add_members(check);
    check->add_flag("--pairwise-only", args_.pairwise_only, "skip the maximality search");
    bind(check, &Runner::coclique_check);
    auto* extend = coclique->add_subcommand("extend", "greedily extend a coclique to a maximal one");
    add_q(extend);
    add_members(extend);
    extend->add_flag("--shuffle", args_.shuffle, "visit candidates in seeded random order");
    bind(extend, &Runner::coclique_extend);
    auto* search = coclique->add_subcommand("search", "seeded search for maximal cocliques");
    add_q(search);
    search->add_option("--trials", args_.trials, "number of searches");
    search->add_option("--min-order", args_.min_order, "smallest order of the start element");
    bind(search, &Runner::coclique_search);

    auto* geom = app.add_subcommand("geom", "orthogonal geometry of PSL_2(q^2)")->require_subcommand(1);
    auto* geom_build = geom->add_subcommand("build", "construct the geometric coclique in PSL_2(q^2)");
    add_q(geom_build);
    geom_build->add_flag("--certify", args_.certify, "check pairwise non-generation and maximality");
    geom_build->add_flag("--pairwise-only", args_.pairwise_only, "with --certify, skip maximality");
    bind(geom_build, &Runner::geom_build);
    auto* geom_census = geom->add_subcommand("census", "types of the 2-spaces of v-perp");
    add_q(geom_census);
    bind(geom_census, &Runner::geom_census);

    auto* ver = app.add_subcommand("verify", "claim verification runs")->require_subcommand(1);
    auto* theorem_a = ver->add_subcommand("theorem-a", "bound on maximal cocliques of PSL_2(p)");
    add_p(theorem_a);
    theorem_a->add_option("--trials", args_.trials, "seeded searches");
    theorem_a->callback([&] { action = [&] { return emit_verdict(verify::verify_theorem_a(args_.p, args_.trials, options_of(cfg_))); }; });
    auto* remark = ver->add_subcommand("remark", "the involution-rich coclique for 3 | p + 1");
    add_p(remark);
    remark->callback([&] { action = [&] { return emit_verdict(verify::verify_remark(args_.p, options_of(cfg_))); }; });
    auto* geometric = ver->add_subcommand("geometric", "the geometric coclique of PSL_2(q^2)");
    geometric->add_option("--q", args_.q, "odd prime")->required();
    geometric->add_flag("--pairwise-only", args_.pairwise_only, "skip the maximality search");
    geometric->callback([&] {
        action = [&] {
            return emit_verdict(verify::verify_geometric(static_cast<std::uint32_t>(args_.q), options_of(cfg_), args_.pairwise_only));
        };
    });
    auto* subfield = ver->add_subcommand("subfield", "subfield involution set in PSL_2(q^2)");
    subfield->add_option("--q", args_.q, "odd prime")->required();
    subfield->callback([&] { action = [&] { return emit_verdict(verify::verify_subfield(static_cast<std::uint32_t>(args_.q), options_of(cfg_))); }; });
    auto* lemmas = ver->add_subcommand("lemmas", "lemma suite on PSL_2(p)");
    add_p(lemmas);
    lemmas->add_option("--seeds", args_.seeds, "seeded runs per case");
    lemmas->add_option("--pairs", args_.pairs, "random involution pairs");
    lemmas->callback([&] { action = [&] { return emit_verdict(verify::verify_lemmas(args_.p, options_of(cfg_), args_.seeds, args_.pairs)); }; });
    auto* iso = ver->add_subcommand("iso", "PSL_2(q^2) as Omega_4^-(q)");
    iso->add_option("--q", args_.q, "odd prime")->required();
    iso->add_option("--pairs", args_.pairs, "random pairs for multiplicativity");
    iso->callback([&] { action = [&] { return emit_verdict(verify::verify_iso(static_cast<std::uint32_t>(args_.q), options_of(cfg_), args_.pairs)); }; });

    auto* cache = app.add_subcommand("cache", "result cache")->require_subcommand(1);
    auto* clear = cache->add_subcommand("clear", "delete every cache entry");
    bind(clear, &Runner::cache_clear);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out_, err_);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        cfg_ = resolve(app);
        if (!action) throw UsageError("no command given");
        const int code = action();
        if (file_) file_->flush();
        return code;
    } catch (const UsageError& e) {
        err_ << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapExceeded& e) {
        err_ << "error: cap exceeded: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BudgetExhausted& e) {
        err_ << "inconclusive: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        err_ << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Runner r(out, err);
    return r.run(argc, argv);
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"psl2lab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace psl2lab::cli
