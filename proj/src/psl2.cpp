#include "psl2lab/psl2.hpp"

#include <algorithm>

#include "psl2lab/errors.hpp"

namespace psl2lab::psl2 {

Mat2 make_mat(const Field& F, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return Mat2{{F.from_int(a), F.from_int(b), F.from_int(c), F.from_int(d)}};
}

Mat2 identity(const Field& F) { return Mat2{{F.one(), F.zero(), F.zero(), F.one()}}; }

Mat2 mul(const Field& F, const Mat2& x, const Mat2& y) {
    return Mat2{{F.add(F.mul(x.e[0], y.e[0]), F.mul(x.e[1], y.e[2])),
                 F.add(F.mul(x.e[0], y.e[1]), F.mul(x.e[1], y.e[3])),
                 F.add(F.mul(x.e[2], y.e[0]), F.mul(x.e[3], y.e[2])),
                 F.add(F.mul(x.e[2], y.e[1]), F.mul(x.e[3], y.e[3]))}};
}

Mat2 negate(const Field& F, const Mat2& x) {
    return Mat2{{F.neg(x.e[0]), F.neg(x.e[1]), F.neg(x.e[2]), F.neg(x.e[3])}};
}

Mat2 inverse_sl2(const Field& F, const Mat2& x) { return Mat2{{x.e[3], F.neg(x.e[1]), F.neg(x.e[2]), x.e[0]}}; }

Fe det(const Field& F, const Mat2& x) { return F.sub(F.mul(x.e[0], x.e[3]), F.mul(x.e[1], x.e[2])); }

Fe trace(const Field& F, const Mat2& x) { return F.add(x.e[0], x.e[3]); }

Mat2 canonical(const Field& F, const Mat2& x) {
    const Mat2 n = negate(F, x);
    return n < x ? n : x;
}

bool is_canonical(const Field& F, const Mat2& x) { return !(negate(F, x) < x); }

std::uint32_t element_order(const Field& F, const Mat2& x) {
    const Mat2 id = identity(F);
    const Mat2 minus_id = negate(F, id);
    Mat2 y = x;
    std::uint32_t k = 1;
    while (y != id && y != minus_id) {
        y = mul(F, y, x);
        ++k;
    }
    return k;
}

std::uint64_t psl2_order(std::uint64_t q) { return q * (q * q - 1) / 2; }

std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q) {
    if (q < 3) throw UsageError("q must be an odd prime power, got " + std::to_string(q));
    std::uint64_t p = 2;
    while (q % p != 0) ++p;
    std::uint64_t r = q;
    std::uint32_t n = 0;
    while (r % p == 0) {
        r /= p;
        ++n;
    }
    if (r != 1) throw UsageError(std::to_string(q) + " is not a prime power");
    if (p == 2) throw UsageError("even q is not supported");
    return {static_cast<std::uint32_t>(p), n};
}

GroupIndex GroupIndex::enumerate(std::uint64_t q, std::uint64_t cap) {
    const auto [p, n] = split_prime_power(q);
    if (psl2_order(q) > cap) throw CapExceeded("PSL_2(" + std::to_string(q) + ") enumeration", psl2_order(q), cap);
    return enumerate(Field::build(p, n), cap);
}

GroupIndex GroupIndex::enumerate(const Field& F, std::uint64_t cap) {
    const std::uint32_t q = F.size();
    if (psl2_order(q) > cap) throw CapExceeded("PSL_2(" + std::to_string(q) + ") enumeration", psl2_order(q), cap);
    GroupIndex G(F);
    G.elements_.reserve(psl2_order(q));
    const Fe one = F.one();
    // Row-major scan over (a, b, c, d); d (or c) is forced by det = 1.
    for (std::uint32_t ia = 0; ia < q; ++ia) {
        const Fe a{ia};
        for (std::uint32_t ib = 0; ib < q; ++ib) {
            const Fe b{ib};
            if (ia != 0) {
                const Fe ainv = F.inv(a);
                for (std::uint32_t ic = 0; ic < q; ++ic) {
                    const Fe c{ic};
                    const Mat2 m{{a, b, c, F.mul(F.add(one, F.mul(b, c)), ainv)}};
                    if (is_canonical(F, m)) G.elements_.push_back(m);
                }
            } else if (ib != 0) {
                const Fe c = F.neg(F.inv(b));
                for (std::uint32_t id = 0; id < q; ++id) {
                    const Mat2 m{{a, b, c, Fe{id}}};
                    if (is_canonical(F, m)) G.elements_.push_back(m);
                }
            }
        }
    }
    G.finish();
    return G;
}

GroupIndex GroupIndex::from_elements(const Field& F, std::vector<Mat2> elements) {
    GroupIndex G(F);
    const std::uint64_t q = F.size();
    if (elements.size() != psl2_order(q)) throw UsageError("stored element list has the wrong length");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const Mat2& m = elements[i];
        for (const Fe& x : m.e) {
            if (x.code >= q) throw UsageError("stored element entry out of range");
        }
        if (det(F, m) != F.one() || !is_canonical(F, m)) throw UsageError("stored element is not canonical");
        if (i > 0 && !(elements[i - 1] < m)) throw UsageError("stored element list is not sorted");
    }
    G.elements_ = std::move(elements);
    G.finish();
    return G;
}

std::uint64_t GroupIndex::key(const Mat2& m) const {
    const std::uint64_t q = field_.size();
    return ((std::uint64_t{m.e[0].code} * q + m.e[1].code) * q + m.e[2].code) * q + m.e[3].code;
}

Index GroupIndex::lookup_canonical(const Mat2& x) const {
    const std::uint64_t k = key(canonical(field_, x));
    if (!direct_.empty()) return direct_[k];
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    return static_cast<Index>(it - keys_.begin());
}

std::optional<Index> GroupIndex::find(const Mat2& x) const {
    for (const Fe& v : x.e) {
        if (v.code >= field_.size()) return std::nullopt;
    }
    if (det(field_, x) != field_.one()) return std::nullopt;
    return lookup_canonical(x);
}

Index GroupIndex::index_of(const Mat2& x) const {
    const auto i = find(x);
    if (!i) throw UsageError("matrix is not an element of PSL_2(" + std::to_string(q()) + ")");
    return *i;
}

void GroupIndex::finish() {
    const std::uint64_t q = field_.size();
    const std::size_t n = elements_.size();
    keys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) keys_[i] = key(elements_[i]);
    const std::uint64_t q4 = q * q * q * q;
    if (q4 <= (std::uint64_t{1} << 24)) {
        direct_.assign(q4, 0xffffffffu);
        for (std::size_t i = 0; i < n; ++i) direct_[keys_[i]] = static_cast<Index>(i);
    }
    identity_ = lookup_canonical(psl2::identity(field_));

    inverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) inverse_[i] = lookup_canonical(inverse_sl2(field_, elements_[i]));

    order_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (order_[i] != 0) continue;
        const auto x = static_cast<Index>(i);
        std::uint32_t k = 1;
        Index y = x;
        while (y != identity_) {
            y = mul(y, x);
            ++k;
        }
        order_[i] = k;
        // Inverses share the order.
        order_[inverse_[i]] = k;
    }
    involutions_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (order_[i] == 2) involutions_.push_back(static_cast<Index>(i));
    }

    const auto [p, deg] = split_prime_power(q);
    std::uint64_t m = std::max<std::uint64_t>({q * (q - 1) / 2, q + 1, 60});
    for (std::uint32_t d = 1; d < deg; ++d) {
        if (deg % d != 0) continue;
        std::uint64_t q1 = 1;
        for (std::uint32_t i = 0; i < d; ++i) q1 *= p;
        const std::uint64_t sub = psl2_order(q1) * ((deg / d) % 2 == 0 ? 2 : 1);
        m = std::max(m, sub);
    }
    max_proper_ = m;
}

std::vector<Index> GroupIndex::elements_of_order(std::uint32_t k) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == k) out.push_back(static_cast<Index>(i));
    }
    return out;
}

namespace {

struct ClosureScratch {
    std::vector<std::uint32_t> stamp;
    std::uint32_t current = 0;
    std::vector<Index> list;

    void prepare(std::size_t n) {
        if (stamp.size() != n) {
            stamp.assign(n, 0);
            current = 0;
        }
        if (++current == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            current = 1;
        }
        list.clear();
    }
};

thread_local ClosureScratch scratch;

std::uint64_t run_closure(const GroupIndex& G, std::span<const Index> gens, std::uint64_t cap, bool* capped) {
    scratch.prepare(G.order());
    auto& list = scratch.list;
    auto& stamp = scratch.stamp;
    const std::uint32_t cur = scratch.current;
    list.push_back(G.identity());
    stamp[G.identity()] = cur;
    *capped = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Index x = list[i];
        for (const Index s : gens) {
            const Index y = G.mul(x, s);
            if (stamp[y] != cur) {
                stamp[y] = cur;
                list.push_back(y);
                if (list.size() > cap) {
                    *capped = true;
                    return list.size();
                }
            }
        }
    }
    return list.size();
}

}  // namespace

SubgroupClosureResult subgroup_closure(const GroupIndex& G, std::span<const Index> gens, std::uint64_t cap) {
    SubgroupClosureResult r;
    run_closure(G, gens, cap, &r.capped);
    r.elements = scratch.list;
    std::sort(r.elements.begin(), r.elements.end());
    return r;
}

std::uint64_t closure_size(const GroupIndex& G, std::span<const Index> gens, std::uint64_t cap, bool* capped) {
    return run_closure(G, gens, cap, capped);
}

bool generates(const GroupIndex& G, Index g, Index h, std::uint64_t cap_override) {
    if (g == G.identity() || h == G.identity()) throw UsageError("generates: identity argument");
    if (g == h) return false;
    const std::uint64_t cap = cap_override != 0 ? cap_override : G.max_proper_subgroup_order();
    const Index gens[2] = {g, h};
    bool capped = false;
    const std::uint64_t n = closure_size(G, gens, cap, &capped);
    return capped || n == G.order();
}

std::string to_string(PairClass c) {
    switch (c) {
        case PairClass::Reducible: return "reducible";
        case PairClass::Dihedral: return "dihedral-contained";
        case PairClass::Exceptional: return "exceptional-contained";
        case PairClass::Subfield: return "subfield-contained";
        case PairClass::Full: return "full";
    }
    return "?";
}

PairClassification trace_triple_classify(const GroupIndex& G, Index g, Index h) {
    if (g == G.identity() || h == G.identity()) throw UsageError("trace_triple_classify: identity argument");
    if (g == h) return {PairClass::Reducible, false};
    const Field& F = G.field();
    const Mat2& gm = G.element(g);
    const Mat2& hm = G.element(h);
    const Mat2 prod = mul(F, gm, hm);
    const Fe a = trace(F, gm);
    const Fe b = trace(F, hm);
    const Fe c = trace(F, prod);

    // tr[g, h] = a^2 + b^2 + c^2 - abc - 2; equal to 2 iff a common eigenvector exists.
    const Fe aa = F.mul(a, a), bb = F.mul(b, b), cc = F.mul(c, c);
    const Fe abc = F.mul(F.mul(a, b), c);
    const Fe commutator = F.sub(F.sub(F.add(F.add(aa, bb), cc), abc), F.from_int(2));
    if (commutator == F.from_int(2)) return {PairClass::Reducible, false};

    // Two of g, h, gh involutions: <g, h> is dihedral.
    const int zeros = (a == F.zero()) + (b == F.zero()) + (c == F.zero());
    if (zeros >= 2) return {PairClass::Dihedral, false};

    const std::uint32_t og = G.order_of(g), oh = G.order_of(h);
    const std::uint32_t ogh = G.order_of(G.index_of(prod));
    bool ambiguous = std::max({og, oh, ogh}) <= 5;  // A4, S4, A5 have element orders <= 5
    PairClass candidate = PairClass::Exceptional;
    if (!ambiguous) {
        // Subfield subgroups PSL_2(p^d) and PGL_2(p^d) have a^2, b^2, c^2, abc in GF(p^d).
        const std::uint32_t n = F.degree();
        for (std::uint32_t d = 1; d < n && !ambiguous; ++d) {
            if (n % d != 0) continue;
            if (F.in_subfield(aa, d) && F.in_subfield(bb, d) && F.in_subfield(cc, d) && F.in_subfield(abc, d)) {
                ambiguous = true;
                candidate = PairClass::Subfield;
            }
        }
    }
    if (!ambiguous) return {PairClass::Full, false};

    const Index gens[2] = {g, h};
    bool capped = false;
    const std::uint64_t size = closure_size(G, gens, G.max_proper_subgroup_order(), &capped);
    if (capped || size == G.order()) return {PairClass::Full, true};
    if (size == 12 || size == 24 || size == 60) return {PairClass::Exceptional, true};
    return {candidate == PairClass::Subfield ? PairClass::Subfield : PairClass::Exceptional, true};
}

bool GenerationTest::operator()(Index g, Index h) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    if (mode_ == GenMode::Trace && cap_ == 0) return trace_triple_classify(*G_, g, h).tag == PairClass::Full;
    return generates(*G_, g, h, cap_);
}

}  // namespace psl2lab::psl2
