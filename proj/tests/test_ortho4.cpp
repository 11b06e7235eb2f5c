#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "psl2lab/errors.hpp"
#include "psl2lab/ortho4.hpp"

using namespace psl2lab;
using namespace psl2lab::ortho4;

namespace {

Mat4 diag(const Field& F, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    Mat4 m{};
    m.fill(F.zero());
    m[0] = F.from_int(a);
    m[5] = F.from_int(b);
    m[10] = F.from_int(c);
    m[15] = F.from_int(d);
    return m;
}

Vec4 e(const Field& F, int i) {
    Vec4 v{};
    v.fill(F.zero());
    v[i] = F.one();
    return v;
}

std::uint64_t key(const Mat4& m, std::uint32_t q) {
    std::uint64_t k = 0;
    for (Fe x : m) k = k * q + x.code;
    return k;
}

bool is_cyclic_group(const GroupIndex& G, std::vector<Index> s) {
    s.push_back(G.identity());
    std::sort(s.begin(), s.end());
    for (Index x : s) {
        if (G.order_of(x) == s.size()) return psl2::subgroup_closure(G, {x}, G.order()).elements == s;
    }
    return false;
}

}  // namespace

TEST_CASE("minus-type certificate") {
    CHECK(QuadSpace::build_minus(3).singular_count() == 20);
    CHECK(QuadSpace::build_minus(5).singular_count() == 104);
    CHECK(QuadSpace::build_minus(7).singular_count() == 300);
    for (std::uint32_t q : {3u, 5u, 7u}) {
        const auto S = QuadSpace::build_minus(q);
        CHECK(S.is_minus_type());
        CHECK(S.singular_count() == minus_type_singular_count(q));
        const auto& F = S.field();
        CHECK(S.gram() == diag(F, 1, -1, 1, -static_cast<std::int64_t>(F.non_square().code)));
        const auto plus = QuadSpace::from_gram(F, diag(F, 1, -1, 1, -1));
        CHECK(!plus.is_minus_type());
        CHECK(plus.singular_count() == plus_type_singular_count(q));
    }
}

TEST_CASE("2-space classification") {
    const auto S7 = QuadSpace::build_minus(7);
    const auto& F7 = S7.field();
    const Vec4 on7[2] = {e(F7, 0), e(F7, 2)};
    CHECK(classify_2space(S7, span(S7, on7)) == TwoSpaceType::Minus);

    const auto S5 = QuadSpace::build_minus(5);
    const auto& F5 = S5.field();
    const Vec4 on5[2] = {e(F5, 0), e(F5, 2)};
    const auto U = span(S5, on5);
    CHECK(classify_2space(S5, U) == TwoSpaceType::Plus);
    CHECK(isotropic_points(S5, U) == 2);

    // e1 + e2 is isotropic and orthogonal to e3, so the plane is degenerate
    const Vec4 d5[2] = {Vec4{F5.one(), F5.one(), F5.zero(), F5.zero()}, e(F5, 2)};
    const auto D = span(S5, d5);
    CHECK(gram_det(S5, D) == F5.zero());
    CHECK(classify_2space(S5, D) == TwoSpaceType::Degenerate);
    CHECK(isotropic_points(S5, D) == 1);

    const Vec4 one[1] = {e(F5, 0)};
    CHECK_THROWS_AS(classify_2space(S5, span(S5, one)), UsageError);
}

TEST_CASE("census of v-perp") {
    for (std::uint64_t q : {3u, 5u, 7u}) {
        const auto S = QuadSpace::build_minus(static_cast<std::uint32_t>(q));
        const auto W = v_perp(S, canonical_v(S.field()));
        CHECK(W.dim() == 3);
        const auto c = census_2spaces(S, W);
        CHECK(c.minus == q * (q - 1) / 2);
        CHECK(c.plus == q * (q + 1) / 2);
        CHECK(c.degenerate == q + 1);
        CHECK(c.total() == q * q + q + 1);
    }
    const auto S5 = QuadSpace::build_minus(5);
    const auto c = census_2spaces(S5, v_perp(S5, canonical_v(S5.field())));
    CHECK(c.minus == 10);
    CHECK(c.plus == 15);
    CHECK(c.degenerate == 6);
}

TEST_CASE("subspace helpers") {
    const auto S = QuadSpace::build_minus(5);
    const auto& F = S.field();
    const Vec4 two[3] = {e(F, 1), e(F, 1), Vec4{F.zero(), F.from_int(2), F.zero(), F.one()}};
    const auto U = span(S, two);
    CHECK(U.dim() == 2);
    CHECK(U.basis[0] == e(F, 1));  // reduced echelon
    CHECK(U.basis[1] == e(F, 3));
    const auto P = perp(S, U);
    CHECK(P.dim() == 2);
    CHECK(intersection_dim(S, U, P) == 0);
    CHECK(is_subspace_of(S, U, v_perp(S, e(F, 0))));
    const Vec4 iso{F.one(), F.one(), F.zero(), F.zero()};
    CHECK_THROWS_AS(v_perp(S, iso), UsageError);
}

TEST_CASE("isomorphism sanity at q = 5") {
    const auto K = KLIsomorphism::build(5);
    const auto& G = K.group();
    const auto& Fq = K.small_field();
    const Mat4 id = identity4(Fq);
    CHECK(G.order() == 7800);
    CHECK(K.image(G.identity()) == id);
    CHECK(K.apply(psl2::negate(K.big_field(), psl2::identity(K.big_field()))) == id);
    CHECK(QuadSpace::from_gram(Fq, K.tensor_gram()).is_minus_type());

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(G.order() - 1));
    for (int k = 0; k < 1000; ++k) {
        const Index a = pick(rng), b = pick(rng);
        REQUIRE(K.image(G.mul(a, b)) == mul4(Fq, K.image(a), K.image(b)));
        REQUIRE(K.apply(G.raw_mul(a, b)) == mul4(Fq, K.image(a), K.image(b)));
    }
    std::size_t identity_images = 0;
    for (Index i = 0; i < G.order(); ++i) {
        const Mat4& m = K.image(i);
        REQUIRE(mul4(Fq, transpose4(m), mul4(Fq, K.space().gram(), m)) == K.space().gram());
        REQUIRE(det4(Fq, m) == Fq.one());
        if (m == id) ++identity_images;
        REQUIRE(K.preimage(m) == i);
    }
    CHECK(identity_images == 1);

    // Two seeded images generate a matrix group of order |PSL_2(25)|.
    const Mat4 g1 = K.image(pick(rng)), g2 = K.image(pick(rng));
    std::unordered_set<std::uint64_t> seen{key(id, 5)};
    std::vector<Mat4> frontier{id};
    while (!frontier.empty() && seen.size() <= 100000) {
        std::vector<Mat4> next;
        for (const auto& m : frontier) {
            for (const auto& g : {g1, g2}) {
                const Mat4 x = mul4(Fq, m, g);
                if (seen.insert(key(x, 5)).second) next.push_back(x);
            }
        }
        frontier = std::move(next);
    }
    CHECK(seen.size() == 7800);
}

TEST_CASE("eigenspace elements at q = 5") {
    const auto K = KLIsomorphism::build(5);
    const auto& S = K.space();
    const auto& G = K.group();
    const Vec4 v = canonical_v(S.field());
    const auto vp = v_perp(S, v);
    bool saw[3] = {false, false, false};
    for (const auto& U : two_spaces_of(S, vp)) {
        const auto els = eigenspace_elements(K, U, v);
        switch (classify_2space(S, U)) {
            case TwoSpaceType::Degenerate: {
                saw[0] = true;
                REQUIRE(els.size() == 4);
                for (Index x : els) {
                    CHECK(G.order_of(x) == 5);
                    for (Index y : els) CHECK(G.mul(x, y) == G.mul(y, x));
                }
                break;
            }
            case TwoSpaceType::Plus:
                saw[1] = true;
                CHECK(els.size() == 5);  // cyclic of order q + 1
                CHECK(is_cyclic_group(G, els));
                break;
            case TwoSpaceType::Minus:
                saw[2] = true;
                CHECK(els.size() == 3);  // cyclic of order q - 1
                CHECK(is_cyclic_group(G, els));
                break;
        }
    }
    CHECK((saw[0] && saw[1] && saw[2]));
    const Vec4 out[2] = {v, e(S.field(), 1)};
    CHECK_THROWS_AS(eigenspace_elements(K, span(S, out), v), UsageError);
}

TEST_CASE("geometric coclique") {
    for (std::uint64_t q : {5u, 7u}) {
        const auto K = KLIsomorphism::build(static_cast<std::uint32_t>(q));
        const auto C = build_geometric_coclique(K);
        CHECK(C.size() == geometric_size(q));
        CHECK(C.size_with_identity() == q * q * q + q);
        CHECK(C.parts_disjoint);
        CHECK(C.members == definitional_members(K, canonical_v(K.small_field())));
    }
    CHECK(build_geometric_coclique(KLIsomorphism::build(5)).size_with_identity() == 130);
    CHECK_THROWS_AS(build_geometric_coclique(KLIsomorphism::build(3)), UsageError);
}

TEST_CASE("geometric coclique structure at q = 5") {
    const auto K = KLIsomorphism::build(5);
    const auto& S = K.space();
    const auto& G = K.group();
    const auto C = build_geometric_coclique(K);
    const auto vp = v_perp(S, C.v);
    // each part plus the identity is a subgroup, and the subgroups meet trivially
    std::vector<std::vector<Index>> groups;
    for (const auto& part : C.parts) {
        auto s = part.elements;
        s.push_back(G.identity());
        std::sort(s.begin(), s.end());
        REQUIRE(psl2::subgroup_closure(G, part.elements, G.order()).elements == s);
        groups.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            std::vector<Index> meet;
            std::set_intersection(groups[i].begin(), groups[i].end(), groups[j].begin(), groups[j].end(),
                                  std::back_inserter(meet));
            REQUIRE(meet == std::vector<Index>{G.identity()});
            REQUIRE(intersection_dim(S, C.parts[i].U, C.parts[j].U) >= 1);
        }
    }
    // every member has a 2-dimensional eigenspace inside v-perp
    for (Index m : C.members) {
        const auto es = eigenspaces(S, K.image(m));
        REQUIRE(std::any_of(es.begin(), es.end(),
                            [&](const auto& x) { return x.space.dim() == 2 && is_subspace_of(S, x.space, vp); }));
    }
}

TEST_CASE("eigenspaces") {
    const auto K = KLIsomorphism::build(5);
    const auto& S = K.space();
    const auto es = eigenspaces(S, identity4(S.field()));
    REQUIRE(es.size() == 1);
    CHECK(es[0].value == S.field().one());
    CHECK(es[0].space.dim() == 4);
    // a 3-dimensional 1-eigenspace forces the identity
    for (Index i = 0; i < K.group().order(); ++i) {
        for (const auto& x : eigenspaces(S, K.image(i))) {
            if (x.value == S.field().one() && x.space.dim() >= 3) REQUIRE(i == K.group().identity());
        }
    }
}

TEST_CASE("outside elements meet the finallem hypothesis") {
    const auto K = KLIsomorphism::build(5);
    const auto C = build_geometric_coclique(K);
    const auto vp = v_perp(K.space(), C.v);
    const std::set<Index> in(C.members.begin(), C.members.end());
    for (Index g = 0; g < K.group().order(); ++g) {
        if (g == K.group().identity() || in.count(g)) continue;
        REQUIRE(meets_finallem_hypothesis(eigen_profile(K, g, vp)));
    }
}

TEST_CASE("orthogonal model rejects unsupported q") {
    CHECK_THROWS_AS(KLIsomorphism::build(9), UsageError);
    CHECK_THROWS_AS(KLIsomorphism::build(2), UsageError);
}
