#include "psl2lab/maxsub.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "psl2lab/errors.hpp"

namespace psl2lab::maxsub {

using psl2::Fe;
using psl2::Field;
using psl2::Mat2;

std::string to_string(KindTag tag) {
    switch (tag) {
        case KindTag::Borel: return "Borel";
        case KindTag::Dminus: return "Dminus";
        case KindTag::Dplus: return "Dplus";
        case KindTag::A4: return "A4";
        case KindTag::S4: return "S4";
        case KindTag::A5: return "A5";
        case KindTag::SubfieldPSL2: return "SubfieldPSL2";
        case KindTag::PSL2qDot2: return "PSL2qDot2";
    }
    return "?";
}

std::optional<KindTag> kind_from_string(const std::string& name) {
    for (KindTag t : {KindTag::Borel, KindTag::Dminus, KindTag::Dplus, KindTag::A4, KindTag::S4, KindTag::A5,
                      KindTag::SubfieldPSL2, KindTag::PSL2qDot2}) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::vector<MaxKind> dickson_kinds(std::uint32_t p) {
    if (!ff::is_prime(p) || p < 3) throw UsageError("dickson_kinds: " + std::to_string(p) + " is not an odd prime");
    std::vector<MaxKind> kinds{{KindTag::Borel, 1}};
    if (p > 11) kinds.push_back({KindTag::Dminus, 1});
    if (p > 7) kinds.push_back({KindTag::Dplus, 1});
    const std::uint32_t r40 = p % 40;
    if (r40 == 3 || r40 == 37 || r40 == 13 || r40 == 27) kinds.push_back({KindTag::A4, 1});
    if (p % 8 == 1 || p % 8 == 7) kinds.push_back({KindTag::S4, 2});
    if (p % 10 == 1 || p % 10 == 9) kinds.push_back({KindTag::A5, 2});
    return kinds;
}

std::vector<MaxKind> aschbacher_kinds(std::uint64_t q0) {
    std::uint64_t q = 1;
    while ((q + 1) * (q + 1) <= q0) ++q;
    if (q * q != q0 || !ff::is_prime(q) || q == 2) {
        throw UsageError("aschbacher_kinds: " + std::to_string(q0) + " is not the square of an odd prime");
    }
    std::vector<MaxKind> kinds{{KindTag::Borel, 1}, {KindTag::PSL2qDot2, 2}, {KindTag::Dminus, 1}, {KindTag::Dplus, 1}};
    if (q % 10 == 3 || q % 10 == 7) kinds.push_back({KindTag::A5, 2});
    return kinds;
}

std::vector<MaxKind> catalogue(const GroupIndex& G) {
    const Field& F = G.field();
    if (F.degree() == 1) return dickson_kinds(F.characteristic());
    if (F.degree() == 2) return aschbacher_kinds(F.size());
    throw UsageError("no maximal-subgroup catalogue for PSL_2(" + std::to_string(F.size()) + ")");
}

std::optional<MaxKind> find_kind(const GroupIndex& G, KindTag tag) {
    for (const MaxKind& k : catalogue(G)) {
        if (k.tag == tag) return k;
    }
    return std::nullopt;
}

namespace {

std::uint64_t subfield_size(std::uint64_t q) {
    const auto [p, n] = psl2::split_prime_power(q);
    if (n == 1) throw UsageError("PSL_2(p) has no proper subfield subgroup");
    std::uint32_t r = 2;
    while (n % r != 0) ++r;
    std::uint64_t q1 = 1;
    for (std::uint32_t i = 0; i < n / r; ++i) q1 *= p;
    return q1;
}

std::uint64_t mix_seed(KindTag tag, std::uint64_t q, int class_index) {
    std::uint64_t z = 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(tag) + 1) ^ (q << 20) ^
                      static_cast<std::uint64_t>(class_index);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<Index> cyclic(const GroupIndex& G, Index y) {
    return psl2::subgroup_closure(G, {y}, G.order()).elements;
}

// Conjugation by diag(delta, 1), delta a non-square: an outer automorphism of PSL_2(q).
std::vector<Index> outer_twist(const GroupIndex& G, std::span<const Index> elements) {
    const Field& F = G.field();
    const Fe delta = F.non_square();
    const Fe delta_inv = F.inv(delta);
    std::vector<Index> out;
    out.reserve(elements.size());
    for (Index i : elements) {
        const Mat2& m = G.element(i);
        out.push_back(G.index_of(Mat2{{m.e[0], F.mul(delta, m.e[1]), F.mul(delta_inv, m.e[2]), m.e[3]}}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> subfield_elements(const GroupIndex& G, std::uint32_t d) {
    const Field& F = G.field();
    std::vector<Index> out;
    for (std::size_t i = 0; i < G.order(); ++i) {
        const Mat2& m = G.element(static_cast<Index>(i));
        if (std::all_of(m.e.begin(), m.e.end(), [&](Fe x) { return F.in_subfield(x, d); })) {
            out.push_back(static_cast<Index>(i));
        }
    }
    return out;
}

std::vector<Index> dihedral_through(const GroupIndex& G, KindTag tag, std::optional<Index> anchor) {
    const std::uint64_t q = G.q();
    const std::uint64_t m = tag == KindTag::Dminus ? (q - 1) / 2 : (q + 1) / 2;
    if (m <= 2) throw UsageError("torus of order " + std::to_string(m) + " is too small for a dihedral maximal");
    std::optional<Index> y;
    if (!anchor) {
        if (tag == KindTag::Dminus) {
            const Field& F = G.field();
            const Fe t = F.primitive();
            y = G.index_of(Mat2{{t, F.zero(), F.zero(), F.inv(t)}});
        } else {
            const auto candidates = G.elements_of_order(static_cast<std::uint32_t>(m));
            if (candidates.empty()) throw InternalError("no element of order (q+1)/2");
            y = candidates.front();
        }
    } else if (G.order_of(*anchor) > 2) {
        const auto C = centralizer(G, *anchor);
        if (C.size() != m) throw UsageError("anchor does not lie in a " + to_string(tag) + " instance");
        for (Index c : C) {
            if (G.order_of(c) == m) {
                y = c;
                break;
            }
        }
    } else {
        for (Index c : G.elements_of_order(static_cast<std::uint32_t>(m))) {
            const Index w = G.conj(*anchor, c);
            if (w == c || w == G.inv(c)) {
                y = c;
                break;
            }
        }
    }
    if (!y) throw UsageError("anchor does not lie in a " + to_string(tag) + " instance");
    const auto T = cyclic(G, *y);
    const Index gens[1] = {*y};
    return normalizer(G, T, gens);
}

std::uint32_t exceptional_product_order(KindTag tag) {
    switch (tag) {
        case KindTag::A4: return 3;
        case KindTag::S4: return 4;
        case KindTag::A5: return 5;
        default: throw UsageError("not an exceptional kind");
    }
}

}  // namespace

std::uint64_t theoretical_order(KindTag tag, std::uint64_t q) {
    switch (tag) {
        case KindTag::Borel: return q * (q - 1) / 2;
        case KindTag::Dminus: return q - 1;
        case KindTag::Dplus: return q + 1;
        case KindTag::A4: return 12;
        case KindTag::S4: return 24;
        case KindTag::A5: return 60;
        case KindTag::SubfieldPSL2: return psl2::psl2_order(subfield_size(q));
        case KindTag::PSL2qDot2: return 2 * psl2::psl2_order(subfield_size(q));
    }
    return 0;
}

bool SubgroupInstance::contains(Index x) const { return std::binary_search(elements.begin(), elements.end(), x); }

std::optional<std::vector<Index>> search_exceptional(const GroupIndex& G, KindTag tag, std::uint64_t seed,
                                                     std::uint64_t budget) {
    const std::uint32_t k = exceptional_product_order(tag);
    const std::uint64_t target = theoretical_order(tag, G.q());
    const auto invs = G.involutions();
    const auto threes = G.elements_of_order(3);
    if (invs.empty() || threes.empty()) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_t(0, invs.size() - 1), pick_s(0, threes.size() - 1);
    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        const Index t = invs[pick_t(rng)];
        const Index s = threes[pick_s(rng)];
        if (G.order_of(G.mul(t, s)) != k) continue;
        const auto r = psl2::subgroup_closure(G, {t, s}, target);
        if (!r.capped && r.elements.size() == target) return r.elements;
    }
    return std::nullopt;
}

SubgroupInstance construct_maximal(const GroupIndex& G, KindTag tag, std::optional<Index> anchor, int class_index) {
    const auto kind = find_kind(G, tag);
    if (!kind) throw UsageError(to_string(tag) + " is not a maximal subgroup kind of PSL_2(" + std::to_string(G.q()) + ")");
    if (class_index < 0 || class_index >= kind->class_count) throw UsageError("class index out of range");
    const Field& F = G.field();

    std::vector<Index> elements;
    bool placed = false;  // anchor already accounted for
    switch (tag) {
        case KindTag::Borel: {
            if (!anchor) {
                elements = point_stabilizer(G, F.one(), F.zero());
            } else {
                const Mat2& m = G.element(*anchor);
                auto fixes = [&](Fe x, Fe y) {
                    const Fe u = F.add(F.mul(m.e[0], x), F.mul(m.e[1], y));
                    const Fe v = F.add(F.mul(m.e[2], x), F.mul(m.e[3], y));
                    return F.mul(u, y) == F.mul(v, x);
                };
                std::optional<std::pair<Fe, Fe>> point;
                for (std::uint32_t t = 0; t < F.size() && !point; ++t) {
                    if (fixes(F.one(), Fe{t})) point = {F.one(), Fe{t}};
                }
                if (!point && fixes(F.zero(), F.one())) point = {F.zero(), F.one()};
                if (!point) throw UsageError("anchor fixes no projective point, so lies in no Borel subgroup");
                elements = point_stabilizer(G, point->first, point->second);
            }
            placed = true;
            break;
        }
        case KindTag::Dminus:
        case KindTag::Dplus:
            elements = dihedral_through(G, tag, anchor);
            placed = true;
            break;
        case KindTag::A4:
        case KindTag::S4:
        case KindTag::A5: {
            const auto found = search_exceptional(G, tag, mix_seed(tag, G.q(), 0));
            if (!found) throw BudgetExhausted("no " + to_string(tag) + " found within the search budget");
            elements = *found;
            break;
        }
        case KindTag::SubfieldPSL2:
            elements = subfield_elements(G, static_cast<std::uint32_t>(F.degree() / 2));
            break;
        case KindTag::PSL2qDot2: {
            const auto S = subfield_elements(G, F.degree() / 2);
            const auto gens = small_generating_set(G, S);
            elements = normalizer(G, S, gens);
            break;
        }
    }
    if (class_index == 1) elements = outer_twist(G, elements);
    if (anchor && !placed) {
        auto moved = conjugate_containing(G, elements, *anchor);
        if (!moved) throw UsageError("anchor does not lie in any " + to_string(tag) + " instance of this class");
        elements = std::move(*moved);
    }

    SubgroupInstance S;
    S.kind = *kind;
    S.class_index = class_index;
    S.elements = std::move(elements);
    S.generators = small_generating_set(G, S.elements);
    const auto check = psl2::subgroup_closure(G, S.generators, G.order());
    if (check.elements != S.elements) throw InternalError(to_string(tag) + " instance is not closed");
    if (S.elements.size() != theoretical_order(tag, G.q())) {
        throw InternalError(to_string(tag) + " instance has order " + std::to_string(S.elements.size()) +
                            ", expected " + std::to_string(theoretical_order(tag, G.q())));
    }
    if (anchor && !S.contains(*anchor)) throw InternalError("anchor lost during construction");
    S.involution_count = count_involutions(G, S);
    return S;
}

std::uint32_t count_involutions(const GroupIndex& G, const SubgroupInstance& S) {
    return static_cast<std::uint32_t>(
        std::count_if(S.elements.begin(), S.elements.end(), [&](Index x) { return G.order_of(x) == 2; }));
}

std::uint64_t conjugate_count_through(const GroupIndex& G, Index x, KindTag tag) {
    if (G.order_of(x) <= 2) throw UsageError("conjugate_count_through needs |x| > 2");
    const auto kind = find_kind(G, tag);
    if (!kind) throw UsageError(to_string(tag) + " is not a maximal subgroup kind of PSL_2(" + std::to_string(G.q()) + ")");
    // N_G(<x>) acts on the instances through x; collect the orbit of one instance per class.
    const auto X = cyclic(G, x);
    const Index xgen[1] = {x};
    const auto Nx = normalizer(G, X, xgen);
    std::set<std::vector<Index>> seen;
    for (int c = 0; c < kind->class_count; ++c) {
        const auto H = construct_maximal(G, tag, std::nullopt, c);
        const auto through = conjugate_containing(G, H.elements, x);
        if (!through) continue;
        for (Index n : Nx) seen.insert(conjugate_set(G, n, *through));
    }
    if (seen.empty()) throw UsageError("x lies in no " + to_string(tag) + " instance");
    return seen.size();
}

std::vector<std::vector<Index>> all_instances(const GroupIndex& G, KindTag tag) {
    const auto kind = find_kind(G, tag);
    if (!kind) throw UsageError(to_string(tag) + " is not a maximal subgroup kind");
    std::vector<std::vector<Index>> out;
    for (int c = 0; c < kind->class_count; ++c) {
        auto cls = conjugacy_class_of_subgroup(G, construct_maximal(G, tag, std::nullopt, c).elements);
        for (auto& s : cls) out.push_back(std::move(s));
    }
    return out;
}

std::vector<char> membership_mask(const GroupIndex& G, std::span<const Index> elements) {
    std::vector<char> mask(G.order(), 0);
    for (Index i : elements) mask[i] = 1;
    return mask;
}

std::vector<Index> centralizer(const GroupIndex& G, Index x) {
    std::vector<Index> out;
    for (std::size_t i = 0; i < G.order(); ++i) {
        const auto g = static_cast<Index>(i);
        if (G.mul(g, x) == G.mul(x, g)) out.push_back(g);
    }
    return out;
}

std::vector<Index> normalizer(const GroupIndex& G, std::span<const Index> elements, std::span<const Index> gens) {
    const auto mask = membership_mask(G, elements);
    std::vector<Index> out;
    for (std::size_t i = 0; i < G.order(); ++i) {
        const auto g = static_cast<Index>(i);
        if (std::all_of(gens.begin(), gens.end(), [&](Index s) { return mask[G.conj(g, s)] != 0; })) out.push_back(g);
    }
    return out;
}

std::vector<Index> conjugate_set(const GroupIndex& G, Index g, std::span<const Index> elements) {
    std::vector<Index> out;
    out.reserve(elements.size());
    const Index ginv = G.inv(g);
    for (Index h : elements) out.push_back(G.mul(G.mul(g, h), ginv));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Index>> conjugacy_class_of_subgroup(const GroupIndex& G, std::span<const Index> elements) {
    std::set<std::vector<Index>> seen;
    std::vector<std::vector<Index>> out;
    // g and gn give the same conjugate for n in N(H); skip g already covered by a known coset.
    std::vector<char> done(G.order(), 0);
    const auto gens = small_generating_set(G, elements);
    const auto N = normalizer(G, elements, gens);
    for (std::size_t i = 0; i < G.order(); ++i) {
        if (done[i]) continue;
        const auto g = static_cast<Index>(i);
        for (Index n : N) done[G.mul(g, n)] = 1;
        auto s = conjugate_set(G, g, elements);
        if (seen.insert(s).second) out.push_back(std::move(s));
    }
    return out;
}

std::optional<std::vector<Index>> conjugate_containing(const GroupIndex& G, std::span<const Index> elements, Index x) {
    const auto mask = membership_mask(G, elements);
    for (std::size_t i = 0; i < G.order(); ++i) {
        const auto g = static_cast<Index>(i);
        if (mask[G.conj(G.inv(g), x)]) return conjugate_set(G, g, elements);
    }
    return std::nullopt;
}

std::vector<Index> small_generating_set(const GroupIndex& G, std::span<const Index> elements) {
    std::vector<Index> by_order(elements.begin(), elements.end());
    std::stable_sort(by_order.begin(), by_order.end(),
                     [&](Index a, Index b) { return G.order_of(a) > G.order_of(b); });
    std::vector<Index> gens;
    std::vector<char> covered(G.order(), 0);
    covered[G.identity()] = 1;
    std::size_t size = 1;
    for (Index e : by_order) {
        if (size == elements.size()) break;
        if (covered[e]) continue;
        gens.push_back(e);
        const auto r = psl2::subgroup_closure(G, gens, G.order());
        for (Index y : r.elements) covered[y] = 1;
        size = r.elements.size();
    }
    return gens;
}

bool is_maximal_subgroup(const GroupIndex& G, std::span<const Index> elements) {
    if (elements.size() == G.order()) return false;
    const auto mask = membership_mask(G, elements);
    auto gens = small_generating_set(G, elements);
    gens.push_back(0);
    for (std::size_t i = 0; i < G.order(); ++i) {
        if (mask[i]) continue;
        gens.back() = static_cast<Index>(i);
        bool capped = false;
        const auto n = psl2::closure_size(G, gens, G.max_proper_subgroup_order(), &capped);
        if (!capped && n != G.order()) return false;
    }
    return true;
}

std::vector<Index> point_stabilizer(const GroupIndex& G, Fe x, Fe y) {
    const Field& F = G.field();
    std::vector<Index> out;
    for (std::size_t i = 0; i < G.order(); ++i) {
        const Mat2& m = G.element(static_cast<Index>(i));
        const Fe u = F.add(F.mul(m.e[0], x), F.mul(m.e[1], y));
        const Fe v = F.add(F.mul(m.e[2], x), F.mul(m.e[3], y));
        if (F.mul(u, y) == F.mul(v, x)) out.push_back(static_cast<Index>(i));
    }
    return out;
}

}  // namespace psl2lab::maxsub
