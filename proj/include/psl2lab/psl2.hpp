#pragma once

// PSL_2(q) as canonical 2x2 matrices of determinant 1 modulo {I, -I}.

#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psl2lab/ff.hpp"

namespace psl2lab::psl2 {

using ff::Fe;
using ff::Field;
using Index = std::uint32_t;

// Entries (a, b, c, d) of [[a, b], [c, d]].
struct Mat2 {
    std::array<Fe, 4> e{};

    Fe a() const { return e[0]; }
    Fe b() const { return e[1]; }
    Fe c() const { return e[2]; }
    Fe d() const { return e[3]; }

    friend constexpr auto operator<=>(const Mat2&, const Mat2&) = default;
};

Mat2 make_mat(const Field& F, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
Mat2 identity(const Field& F);
Mat2 mul(const Field& F, const Mat2& x, const Mat2& y);
Mat2 negate(const Field& F, const Mat2& x);
// Inverse of a determinant-1 matrix.
Mat2 inverse_sl2(const Field& F, const Mat2& x);
Fe det(const Field& F, const Mat2& x);
Fe trace(const Field& F, const Mat2& x);
// Of {M, -M}, the one whose entry list is lexicographically smaller.
Mat2 canonical(const Field& F, const Mat2& x);
bool is_canonical(const Field& F, const Mat2& x);
// Smallest k >= 1 with x^k = +-I; x must have determinant 1.
std::uint32_t element_order(const Field& F, const Mat2& x);

inline constexpr std::uint64_t kDefaultEnumerationCap = 100000;

// q(q^2 - 1)/2 for odd q.
std::uint64_t psl2_order(std::uint64_t q);
// Splits an odd prime power q = p^n; throws UsageError otherwise.
std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q);

class GroupIndex {
  public:
    // psl2_enumerate.  Elements are listed in increasing (a, b, c, d) order.
    static GroupIndex enumerate(std::uint64_t q, std::uint64_t cap = kDefaultEnumerationCap);
    static GroupIndex enumerate(const Field& F, std::uint64_t cap = kDefaultEnumerationCap);
    // Rebuilds an index from a stored element list; validates it.
    static GroupIndex from_elements(const Field& F, std::vector<Mat2> elements);

    const Field& field() const { return field_; }
    std::uint32_t q() const { return field_.size(); }
    std::size_t order() const { return elements_.size(); }

    const Mat2& element(Index i) const { return elements_[i]; }
    std::span<const Mat2> elements() const { return elements_; }
    // Position of the class of x (any sign); nullopt if det x != 1.
    std::optional<Index> find(const Mat2& x) const;
    Index index_of(const Mat2& x) const;
    Index identity() const { return identity_; }

    Index mul(Index x, Index y) const { return lookup_canonical(raw_mul(x, y)); }
    Index inv(Index x) const { return inverse_[x]; }
    // g x g^-1
    Index conj(Index g, Index x) const { return mul(mul(g, x), inverse_[g]); }
    std::uint32_t order_of(Index x) const { return order_[x]; }
    std::span<const std::uint32_t> order_table() const { return order_; }
    std::span<const Index> involutions() const { return involutions_; }
    std::vector<Index> elements_of_order(std::uint32_t k) const;

    // Upper bound on the order of every proper subgroup of PSL_2(q).
    std::uint64_t max_proper_subgroup_order() const { return max_proper_; }

    // Product of the stored representatives (not canonicalized).
    Mat2 raw_mul(Index x, Index y) const { return psl2::mul(field_, elements_[x], elements_[y]); }

  private:
    explicit GroupIndex(Field F) : field_(std::move(F)) {}
    void finish();
    std::uint64_t key(const Mat2& m) const;
    Index lookup_canonical(const Mat2& m) const;

    Field field_;
    std::vector<Mat2> elements_;
    std::vector<std::uint64_t> keys_;
    std::vector<Index> direct_;  // key -> index when q^4 is small
    std::vector<Index> inverse_;
    std::vector<std::uint32_t> order_;
    std::vector<Index> involutions_;
    Index identity_ = 0;
    std::uint64_t max_proper_ = 0;
};

struct SubgroupClosureResult {
    std::vector<Index> elements;  // sorted; complete only when !capped
    bool capped = false;
};

// Breadth-first closure of gens under right multiplication.  Stops as soon as
// more than cap elements have been found.
SubgroupClosureResult subgroup_closure(const GroupIndex& G, std::span<const Index> gens, std::uint64_t cap);
inline SubgroupClosureResult subgroup_closure(const GroupIndex& G, std::initializer_list<Index> gens,
                                              std::uint64_t cap) {
    return subgroup_closure(G, std::span<const Index>(gens.begin(), gens.size()), cap);
}
// Size of <gens> only, without materializing the element list.
std::uint64_t closure_size(const GroupIndex& G, std::span<const Index> gens, std::uint64_t cap, bool* capped);

// <g, h> = G by closure with cap = largest proper subgroup order.
bool generates(const GroupIndex& G, Index g, Index h, std::uint64_t cap_override = 0);

enum class PairClass { Reducible, Dihedral, Exceptional, Subfield, Full };
std::string to_string(PairClass c);

struct PairClassification {
    PairClass tag = PairClass::Reducible;
    bool used_closure = false;
};

// Decides <g, h> = G from the sign-invariant trace data of the lifts
// (tr g, tr h, tr gh), falling back to closure when the data alone cannot rule
// out an exceptional or subfield subgroup.  tag == Full iff generates().
PairClassification trace_triple_classify(const GroupIndex& G, Index g, Index h);

enum class GenMode { Closure, Trace };

// Generation oracle shared by the graph and verification code.
class GenerationTest {
  public:
    explicit GenerationTest(const GroupIndex& G, GenMode mode = GenMode::Trace, std::uint64_t cap_override = 0)
        : G_(&G), mode_(mode), cap_(cap_override) {}

    bool operator()(Index g, Index h) const;
    const GroupIndex& group() const { return *G_; }
    GenMode mode() const { return mode_; }
    std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }

  private:
    const GroupIndex* G_;
    GenMode mode_;
    std::uint64_t cap_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

}  // namespace psl2lab::psl2
