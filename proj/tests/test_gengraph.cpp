#include <algorithm>

#include "doctest.h"
#include "psl2lab/errors.hpp"
#include "psl2lab/gengraph.hpp"

using namespace psl2lab;
using gengraph::EdgeOracle;
using gengraph::GeneratingGraph;
using maxsub::KindTag;
using psl2::GenerationTest;
using psl2::GroupIndex;
using psl2::Index;

namespace {

std::vector<Index> without_identity(const GroupIndex& G, std::vector<Index> s) {
    s.erase(std::remove(s.begin(), s.end(), G.identity()), s.end());
    return s;
}

}  // namespace

TEST_CASE("graph shape") {
    const auto G5 = GroupIndex::enumerate(5);
    GenerationTest t5(G5);
    const auto g5 = GeneratingGraph::build(t5);
    CHECK(g5.vertex_count() == 59);
    CHECK(gengraph::is_coclique(EdgeOracle(g5), G5.involutions()));

    const auto G7 = GroupIndex::enumerate(7);
    GenerationTest t7(G7, psl2::GenMode::Closure);
    const auto g7 = GeneratingGraph::build(t7, gengraph::kDefaultGraphCap, 2);
    CHECK(g7.vertex_count() == 167);
    for (Index v = 0; v < G7.order(); ++v) {
        CHECK(!g7.adjacent(v, v));
        if (v != G7.identity()) CHECK(g7.degree(v) >= 1);
        for (Index w = 0; w < G7.order(); ++w) REQUIRE(g7.adjacent(v, w) == g7.adjacent(w, v));
    }
    CHECK(g7.degree(G7.identity()) == 0);
    const auto edges = g7.edges();
    CHECK(edges.size() == g7.edge_count());
    CHECK(std::is_sorted(edges.begin(), edges.end()));

    CHECK_THROWS_AS(GeneratingGraph::build(t7, 100), CapExceeded);
    CHECK(GeneratingGraph::from_words(G7, g7.words()).words() == g7.words());
    auto broken = g7.words();
    broken[0] ^= 2;
    CHECK_THROWS_AS(GeneratingGraph::from_words(G7, broken), UsageError);
}

TEST_CASE("graph and on-demand oracle agree") {
    const auto G = GroupIndex::enumerate(11);
    GenerationTest t(G);
    const auto g = GeneratingGraph::build(t);
    GenerationTest closure(G, psl2::GenMode::Closure);
    for (Index a = 1; a < G.order(); a += 13)
        for (Index b = 1; b < G.order(); ++b)
            if (a != G.identity() && b != G.identity()) REQUIRE(g.adjacent(a, b) == closure(a, b));
}

TEST_CASE("coclique predicates") {
    const auto G7 = GroupIndex::enumerate(7);
    GenerationTest t7(G7);
    const EdgeOracle e7(t7);
    const Index x = G7.elements_of_order(4).front();
    CHECK(gengraph::is_coclique(e7, std::vector<Index>{x}));
    CHECK(gengraph::is_coclique(e7, G7.involutions()));
    const auto B = maxsub::construct_maximal(G7, KindTag::Borel);
    CHECK(gengraph::is_coclique(e7, without_identity(G7, B.elements)));
    CHECK_THROWS_AS(gengraph::is_coclique(e7, std::vector<Index>{G7.identity()}), UsageError);
    CHECK_THROWS_AS(gengraph::is_coclique(e7, std::vector<Index>{}), UsageError);
}

TEST_CASE("maximality in PSL2(13)") {
    const auto G = GroupIndex::enumerate(13);
    GenerationTest t(G);
    const auto graph = GeneratingGraph::build(t);
    const EdgeOracle e(graph);

    const auto inv = gengraph::certify(e, G.involutions());
    CHECK(inv.verified_pairwise);
    CHECK(inv.verified_maximal);
    CHECK(inv.witness_log.size() == G.order() - 1 - G.involutions().size());
    for (auto [g, h] : inv.witness_log) REQUIRE(psl2::generates(G, g, h));

    const auto B = maxsub::construct_maximal(G, KindTag::Borel);
    CHECK(gengraph::certify(e, without_identity(G, B.elements)).verified_maximal);

    const Index x3 = G.elements_of_order(3).front();
    const auto m = gengraph::check_maximal(e, std::vector<Index>{x3});
    CHECK(!m.maximal);
    REQUIRE(m.extending);
    CHECK(!e(x3, *m.extending));
}

TEST_CASE("extension") {
    const auto G = GroupIndex::enumerate(13);
    GenerationTest t(G);
    const auto graph = GeneratingGraph::build(t);
    const EdgeOracle e(graph);

    const Index x7 = G.elements_of_order(7).front();
    const auto D = maxsub::construct_maximal(G, KindTag::Dplus, x7);
    const auto ext = gengraph::extend_to_maximal(e, std::vector<Index>{x7});
    CHECK(ext.members == without_identity(G, D.elements));
    CHECK(gengraph::check_maximal(e, ext.members).maximal);

    const Index t2 = G.involutions().front();
    const auto ext2 = gengraph::extend_to_maximal(e, std::vector<Index>{t2}, 99);
    CHECK(ext2.verified_maximal);
    CHECK(gengraph::certify(e, ext2.members).verified_maximal);

    const auto B = without_identity(G, maxsub::construct_maximal(G, KindTag::Borel).elements);
    CHECK(gengraph::extend_to_maximal(e, B, 5).members == B);
    CHECK_THROWS_AS(gengraph::extend_to_maximal(e, std::vector<Index>{x7, G.elements_of_order(13).front()}),
                    UsageError);
}

TEST_CASE("search") {
    const auto G7 = GroupIndex::enumerate(7);
    GenerationTest t7(G7);
    const auto g7 = GeneratingGraph::build(t7);
    const EdgeOracle e7(g7);
    CHECK_THROWS_AS(gengraph::search_cocliques(e7, 0, 1), UsageError);
    const auto big = [&](Index i) { return G7.order_of(i) > 2; };
    const auto found = gengraph::search_cocliques(e7, 100, 1, big);
    CHECK(found.size() == 100);
    for (const auto& c : found) {
        REQUIRE(gengraph::check_maximal(e7, c.members).maximal);
        REQUIRE(gengraph::is_coclique(e7, c.members));
        REQUIRE(std::any_of(c.members.begin(), c.members.end(), big));
    }
    // reproducible from the seed
    CHECK(gengraph::search_cocliques(e7, 5, 1, big)[4].members == found[4].members);

    const auto G11 = GroupIndex::enumerate(11);
    GenerationTest t11(G11);
    const auto g11 = GeneratingGraph::build(t11);
    const EdgeOracle e11(g11);
    const auto all = gengraph::search_cocliques(e11, 100, 2);
    for (const auto& c : all) REQUIRE(gengraph::check_maximal(e11, c.members).maximal);
    // Uniform greedy growth rarely lands on the involution class here (0 of
    // 1000 trials with seed 2); it is certified directly instead.
    CHECK(gengraph::certify(e11, G11.involutions()).verified_maximal);
}

TEST_CASE("maximal subgroups are cocliques") {
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
        const auto G = GroupIndex::enumerate(p);
        GenerationTest t(G);
        const auto graph = GeneratingGraph::build(t);
        for (const auto& k : maxsub::dickson_kinds(p)) {
            for (const auto& inst : maxsub::all_instances(G, k.tag)) {
                REQUIRE(gengraph::is_coclique(EdgeOracle(graph), without_identity(G, inst)));
            }
        }
    }
}

TEST_CASE("classification") {
    const auto G = GroupIndex::enumerate(13);
    CHECK(gengraph::classify(G, G.involutions()).label == "involution-class");
    const auto A = maxsub::construct_maximal(G, KindTag::A4);
    const auto cA = gengraph::classify(G, without_identity(G, A.elements));
    CHECK(cA.label == "subgroup:A4");
    const auto D = maxsub::construct_maximal(G, KindTag::Dminus, std::nullopt);
    CHECK(gengraph::classify(G, without_identity(G, D.elements)).kind == KindTag::Dminus);
    const Index x = G.elements_of_order(7).front();
    const auto cyc = psl2::subgroup_closure(G, {x}, G.order()).elements;
    const auto small = gengraph::classify(G, without_identity(G, cyc));
    CHECK(small.label == "subgroup");
    CHECK(small.closure_order == 7);
    const auto single = gengraph::classify(G, std::vector<Index>{x});
    CHECK(single.label == "other");
    CHECK(single.closure_proper);
}
