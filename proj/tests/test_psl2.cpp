#include <random>

#include "doctest.h"
#include "psl2lab/errors.hpp"
#include "psl2lab/psl2.hpp"

using namespace psl2lab;
using psl2::GroupIndex;
using psl2::Index;
using psl2::Mat2;

TEST_CASE("group orders and involution counts") {
    CHECK(GroupIndex::enumerate(5).order() == 60);
    const auto G7 = GroupIndex::enumerate(7);
    CHECK(G7.order() == 168);
    CHECK(G7.involutions().size() == 21);
    CHECK(GroupIndex::enumerate(25).order() == 7800);
    CHECK_THROWS_AS(GroupIndex::enumerate(8), UsageError);
    CHECK_THROWS_AS(GroupIndex::enumerate(6), UsageError);
    CHECK_THROWS_AS(GroupIndex::enumerate(59), CapExceeded);
    CHECK(GroupIndex::enumerate(59, 200000).order() == 102660);
}

TEST_CASE("index consistency and canonical form") {
    for (std::uint32_t q : {5u, 7u, 9u, 13u}) {
        const auto G = GroupIndex::enumerate(q);
        const auto& F = G.field();
        for (Index i = 0; i < G.order(); ++i) {
            const Mat2& m = G.element(i);
            REQUIRE(G.index_of(m) == i);
            REQUIRE(G.index_of(psl2::negate(F, m)) == i);
            REQUIRE(psl2::det(F, m) == F.one());
            REQUIRE(psl2::is_canonical(F, m));
            REQUIRE(psl2::canonical(F, psl2::canonical(F, m)) == psl2::canonical(F, m));
            REQUIRE(psl2::canonical(F, psl2::negate(F, m)) == m);
            if (i > 0) REQUIRE(G.element(i - 1) < m);
        }
    }
}

TEST_CASE("element orders") {
    const auto G7 = GroupIndex::enumerate(7);
    const auto& F7 = G7.field();
    CHECK(G7.order_of(G7.identity()) == 1);
    CHECK(G7.order_of(G7.index_of(psl2::make_mat(F7, 1, 1, 0, 1))) == 7);
    const auto G5 = GroupIndex::enumerate(5);
    CHECK(G5.order_of(G5.index_of(psl2::make_mat(G5.field(), 0, 1, -1, 0))) == 2);

    for (std::uint32_t q : {5u, 7u, 9u, 13u}) {
        const auto G = GroupIndex::enumerate(q);
        const std::uint32_t p = G.field().characteristic();
        for (Index i = 0; i < G.order(); ++i) {
            const auto o = G.order_of(i);
            REQUIRE(o == psl2::element_order(G.field(), G.element(i)));
            REQUIRE((p % o == 0 || (q - 1) % o == 0 || (q + 1) % o == 0));
            REQUIRE(o <= std::max(p, (q + 1) / 2));
        }
    }
}

TEST_CASE("closure") {
    const auto G7 = GroupIndex::enumerate(7);
    const auto r = psl2::subgroup_closure(G7, {G7.identity()}, 1000);
    CHECK(r.elements.size() == 1);
    CHECK(!r.capped);
    const Index u = G7.index_of(psl2::make_mat(G7.field(), 1, 1, 0, 1));
    CHECK(psl2::subgroup_closure(G7, {u}, 1000).elements.size() == 7);
    CHECK(psl2::subgroup_closure(G7, {u}, 3).capped);
}

TEST_CASE("generation") {
    const auto G5 = GroupIndex::enumerate(5);
    const auto& F = G5.field();
    const Index g = G5.index_of(psl2::make_mat(F, 1, 1, 0, 1));
    const Index h = G5.index_of(psl2::make_mat(F, 1, 0, 1, 1));
    CHECK(psl2::generates(G5, g, h));
    CHECK(!psl2::generates(G5, g, g));
    CHECK_THROWS_AS(psl2::generates(G5, g, G5.identity()), UsageError);

    const auto G13 = GroupIndex::enumerate(13);
    const auto inv = G13.involutions();
    for (std::size_t i = 0; i < inv.size(); i += 7)
        for (std::size_t j = 0; j < inv.size(); j += 5) CHECK(!psl2::generates(G13, inv[i], inv[j]));
}

TEST_CASE("generation is symmetric") {
    const auto G = GroupIndex::enumerate(13);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> pick(1, static_cast<Index>(G.order() - 1));
    int checked = 0;
    while (checked < 10000) {
        const Index a = pick(rng), b = pick(rng);
        if (a == G.identity() || b == G.identity()) continue;
        REQUIRE(psl2::generates(G, a, b) == psl2::generates(G, b, a));
        ++checked;
    }
}

TEST_CASE("trace classifier agrees with closure on sampled pairs") {
    for (std::uint32_t q : {9u, 11u, 13u, 25u, 27u, 53u}) {
        const auto G = GroupIndex::enumerate(q);
        std::mt19937_64 rng(q);
        std::uniform_int_distribution<Index> pick(0, static_cast<Index>(G.order() - 1));
        CAPTURE(q);
        for (int k = 0; k < 3000; ++k) {
            const Index a = pick(rng), b = pick(rng);
            if (a == G.identity() || b == G.identity()) continue;
            const auto c = psl2::trace_triple_classify(G, a, b);
            REQUIRE((c.tag == psl2::PairClass::Full) == psl2::generates(G, a, b));
        }
        // involution pairs are always dihedral
        const auto inv = G.involutions();
        for (std::size_t k = 0; k + 1 < inv.size() && k < 200; ++k) {
            REQUIRE(psl2::trace_triple_classify(G, inv[k], inv[k + 1]).tag != psl2::PairClass::Full);
        }
    }
}

TEST_CASE("generation test policy counts calls") {
    const auto G = GroupIndex::enumerate(7);
    psl2::GenerationTest closure(G, psl2::GenMode::Closure), trace(G);
    const Index a = G.elements_of_order(7).front(), b = G.elements_of_order(4).front();
    CHECK(closure(a, b) == trace(a, b));
    CHECK(closure.calls() == 1);
}

TEST_CASE("from_elements validates") {
    const auto G = GroupIndex::enumerate(5);
    std::vector<Mat2> els(G.elements().begin(), G.elements().end());
    const auto H = GroupIndex::from_elements(G.field(), els);
    CHECK(H.order() == 60);
    els.pop_back();
    CHECK_THROWS(GroupIndex::from_elements(G.field(), els));
}
