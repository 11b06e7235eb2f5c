#pragma once

// Maximal subgroups of PSL_2(p) (Dickson) and PSL_2(q^2) (Aschbacher classes),
// explicit instances, and the conjugate-counting primitives built on them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psl2lab/psl2.hpp"

namespace psl2lab::maxsub {

using psl2::GroupIndex;
using psl2::Index;

enum class KindTag { Borel, Dminus, Dplus, A4, S4, A5, SubfieldPSL2, PSL2qDot2 };

std::string to_string(KindTag tag);
std::optional<KindTag> kind_from_string(const std::string& name);

struct MaxKind {
    KindTag tag = KindTag::Borel;
    int class_count = 1;

    friend bool operator==(const MaxKind&, const MaxKind&) = default;
};

// Congruence table for PSL_2(p), p an odd prime.
std::vector<MaxKind> dickson_kinds(std::uint32_t p);
// Catalogue for PSL_2(q0) with q0 = q^2, q an odd prime.
std::vector<MaxKind> aschbacher_kinds(std::uint64_t q0);
// dickson_kinds or aschbacher_kinds depending on G's field.
std::vector<MaxKind> catalogue(const GroupIndex& G);
std::optional<MaxKind> find_kind(const GroupIndex& G, KindTag tag);

// Order predicted by the catalogue for the group of order parameter q.
std::uint64_t theoretical_order(KindTag tag, std::uint64_t q);

struct SubgroupInstance {
    MaxKind kind;
    int class_index = 0;
    std::vector<Index> generators;
    std::vector<Index> elements;  // sorted, includes the identity
    std::uint32_t involution_count = 0;

    bool contains(Index x) const;
};

// Builds (and verifies) an instance of kind.  anchor, when given, must lie in
// the returned instance.  class_index selects among the classes of two-class
// kinds; the second class is the image of the first under conjugation by
// diag(delta, 1) with delta a non-square.
SubgroupInstance construct_maximal(const GroupIndex& G, KindTag tag, std::optional<Index> anchor = std::nullopt,
                                   int class_index = 0);

// Number of distinct instances of kind (all classes) containing x, |x| > 2.
std::uint64_t conjugate_count_through(const GroupIndex& G, Index x, KindTag tag);

std::uint32_t count_involutions(const GroupIndex& G, const SubgroupInstance& S);

// Every instance of kind in G (all conjugates of every class).
std::vector<std::vector<Index>> all_instances(const GroupIndex& G, KindTag tag);

// Seeded search for a subgroup isomorphic to A4, S4 or A5 (generated by an
// involution t and an element s of order 3 with |ts| = 3, 4, 5), without
// consulting the catalogue.  nullopt when the budget runs out.
std::optional<std::vector<Index>> search_exceptional(const GroupIndex& G, KindTag tag, std::uint64_t seed,
                                                     std::uint64_t budget = 200000);

// ---- subgroup utilities -------------------------------------------------

std::vector<char> membership_mask(const GroupIndex& G, std::span<const Index> elements);
std::vector<Index> centralizer(const GroupIndex& G, Index x);
// N_G(H) for the subgroup H = elements, generated by gens.
std::vector<Index> normalizer(const GroupIndex& G, std::span<const Index> elements, std::span<const Index> gens);
// g H g^-1, sorted.
std::vector<Index> conjugate_set(const GroupIndex& G, Index g, std::span<const Index> elements);
// All distinct G-conjugates of H, in order of first appearance over g.
std::vector<std::vector<Index>> conjugacy_class_of_subgroup(const GroupIndex& G, std::span<const Index> elements);
// A conjugate of H containing x, if one exists.
std::optional<std::vector<Index>> conjugate_containing(const GroupIndex& G, std::span<const Index> elements, Index x);
// A short generating list for the subgroup H.
std::vector<Index> small_generating_set(const GroupIndex& G, std::span<const Index> elements);
// Exhaustive: <H, g> = G for every g outside H.
bool is_maximal_subgroup(const GroupIndex& G, std::span<const Index> elements);
// Elements fixing the projective point (x : y).
std::vector<Index> point_stabilizer(const GroupIndex& G, psl2::Fe x, psl2::Fe y);

}  // namespace psl2lab::maxsub
