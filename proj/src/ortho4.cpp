#include "psl2lab/ortho4.hpp"

#include <algorithm>

#include "psl2lab/errors.hpp"

namespace psl2lab::ortho4 {

namespace {

using Row = std::vector<Fe>;

// In-place reduced row echelon form; zero rows are dropped.
void rref(const Field& F, std::vector<Row>& rows) {
    if (rows.empty()) return;
    const std::size_t n = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == F.zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const Fe s = F.inv(rows[r][c]);
        for (auto& x : rows[r]) x = F.mul(x, s);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == F.zero()) continue;
            const Fe f = rows[i][c];
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
        }
        ++r;
    }
    rows.resize(r);
}

// Basis of {x : rows x = 0}; every row has length n.
std::vector<Row> kernel(const Field& F, std::vector<Row> rows, std::size_t n) {
    rref(F, rows);
    std::vector<std::size_t> pivots;
    for (const auto& row : rows) {
        std::size_t c = 0;
        while (row[c] == F.zero()) ++c;
        pivots.push_back(c);
    }
    std::vector<Row> out;
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        Row x(n, F.zero());
        x[free] = F.one();
        for (std::size_t i = 0; i < rows.size(); ++i) x[pivots[i]] = F.neg(rows[i][free]);
        out.push_back(std::move(x));
    }
    return out;
}

Row to_row(const Vec4& v) { return Row(v.begin(), v.end()); }
Vec4 to_vec(const Row& r) { return Vec4{r[0], r[1], r[2], r[3]}; }

Vec4 vec_from_code(const Field& F, std::uint32_t code) {
    Vec4 v{};
    for (int i = 3; i >= 0; --i) {
        v[i] = Fe{code % F.size()};
        code /= F.size();
    }
    return v;
}

std::uint32_t power4(std::uint32_t q) { return q * q * q * q; }

Mat4 diag4(Fe a, Fe b, Fe c, Fe d, const Field& F) {
    Mat4 m{};
    m.fill(F.zero());
    m[0] = a;
    m[5] = b;
    m[10] = c;
    m[15] = d;
    return m;
}

}  // namespace

Mat4 identity4(const Field& F) { return diag4(F.one(), F.one(), F.one(), F.one(), F); }

Mat4 mul4(const Field& F, const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Fe s = F.zero();
            for (int k = 0; k < 4; ++k) s = F.add(s, F.mul(a[i * 4 + k], b[k * 4 + j]));
            c[i * 4 + j] = s;
        }
    }
    return c;
}

Mat4 transpose4(const Mat4& a) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[j * 4 + i] = a[i * 4 + j];
    return t;
}

Vec4 apply4(const Field& F, const Mat4& a, const Vec4& x) {
    Vec4 y{};
    for (int i = 0; i < 4; ++i) {
        Fe s = F.zero();
        for (int k = 0; k < 4; ++k) s = F.add(s, F.mul(a[i * 4 + k], x[k]));
        y[i] = s;
    }
    return y;
}

Fe det4(const Field& F, const Mat4& a) {
    // Gaussian elimination with sign tracking.
    Mat4 m = a;
    Fe det = F.one();
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        while (piv < 4 && m[piv * 4 + c] == F.zero()) ++piv;
        if (piv == 4) return F.zero();
        if (piv != c) {
            for (int j = 0; j < 4; ++j) std::swap(m[c * 4 + j], m[piv * 4 + j]);
            det = F.neg(det);
        }
        det = F.mul(det, m[c * 4 + c]);
        const Fe s = F.inv(m[c * 4 + c]);
        for (int i = c + 1; i < 4; ++i) {
            const Fe f = F.mul(m[i * 4 + c], s);
            for (int j = c; j < 4; ++j) m[i * 4 + j] = F.sub(m[i * 4 + j], F.mul(f, m[c * 4 + j]));
        }
    }
    return det;
}

Mat4 inverse4(const Field& F, const Mat4& a) {
    std::vector<Row> rows(4, Row(8, F.zero()));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) rows[i][j] = a[i * 4 + j];
        rows[i][4 + i] = F.one();
    }
    rref(F, rows);
    if (rows.size() != 4 || rows[3][3] != F.one()) throw InternalError("inverse4: singular matrix");
    Mat4 inv{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inv[i * 4 + j] = rows[i][4 + j];
    return inv;
}

// ---- QuadSpace --------------------------------------------------------------

QuadSpace::QuadSpace(Field F, Mat4 gram) : F_(std::move(F)), gram_(gram) {
    const std::uint32_t total = power4(F_.size());
    for (std::uint32_t code = 1; code < total; ++code) {
        if (quad(vec_from_code(F_, code)) == F_.zero()) ++singular_;
    }
}

QuadSpace QuadSpace::from_gram(const Field& F, const Mat4& gram) {
    if (F.size() > 31) throw UsageError("quadratic spaces are limited to q <= 31");
    if (transpose4(gram) != gram) throw UsageError("Gram matrix is not symmetric");
    if (det4(F, gram) == F.zero()) throw UsageError("Gram matrix is singular");
    return QuadSpace(F, gram);
}

QuadSpace QuadSpace::build_minus(std::uint32_t q) {
    const auto [p, n] = psl2::split_prime_power(q);
    const Field F = Field::build(p, n);
    const Fe delta = F.non_square();
    auto S = from_gram(F, diag4(F.one(), F.neg(F.one()), F.one(), F.neg(delta), F));
    if (S.is_minus_type()) return S;
    for (std::uint32_t c = 1; c < F.size(); ++c) {
        auto T = from_gram(F, diag4(F.one(), F.neg(F.one()), F.one(), Fe{c}, F));
        if (T.is_minus_type()) return T;
    }
    throw InternalError("no minus-type diagonal form found");
}

Fe QuadSpace::form(const Vec4& x, const Vec4& y) const {
    Fe s = F_.zero();
    for (int i = 0; i < 4; ++i) {
        if (x[i] == F_.zero()) continue;
        for (int j = 0; j < 4; ++j) s = F_.add(s, F_.mul(F_.mul(x[i], gram_[i * 4 + j]), y[j]));
    }
    return s;
}

bool QuadSpace::is_minus_type() const { return singular_ == minus_type_singular_count(q()); }

std::uint64_t minus_type_singular_count(std::uint64_t q) { return (q * q + 1) * (q - 1); }
std::uint64_t plus_type_singular_count(std::uint64_t q) { return (q * q - 1) * (q + 1); }

// ---- subspaces --------------------------------------------------------------

Subspace span(const QuadSpace& S, std::span<const Vec4> vectors) {
    const Field& F = S.field();
    std::vector<Row> rows;
    for (const auto& v : vectors) rows.push_back(to_row(v));
    rref(F, rows);
    Subspace U;
    for (const auto& r : rows) U.basis.push_back(to_vec(r));
    for (const auto& a : U.basis)
        for (const auto& b : U.basis) U.gram.push_back(S.form(a, b));
    return U;
}

Subspace perp(const QuadSpace& S, const Subspace& U) {
    const Field& F = S.field();
    std::vector<Row> rows;
    for (const auto& u : U.basis) {
        Row r(4, F.zero());
        for (int j = 0; j < 4; ++j) {
            Fe s = F.zero();
            for (int i = 0; i < 4; ++i) s = F.add(s, F.mul(u[i], S.gram()[i * 4 + j]));
            r[j] = s;
        }
        rows.push_back(std::move(r));
    }
    std::vector<Vec4> basis;
    if (rows.empty()) {
        for (int i = 0; i < 4; ++i) {
            Vec4 e{};
            e.fill(F.zero());
            e[i] = F.one();
            basis.push_back(e);
        }
    } else {
        for (const auto& k : kernel(F, rows, 4)) basis.push_back(to_vec(k));
    }
    return span(S, basis);
}

bool contains(const QuadSpace& S, const Subspace& U, const Vec4& x) {
    std::vector<Vec4> all = U.basis;
    all.push_back(x);
    return span(S, all).dim() == U.dim();
}

bool is_subspace_of(const QuadSpace& S, const Subspace& A, const Subspace& B) {
    return std::all_of(A.basis.begin(), A.basis.end(), [&](const Vec4& a) { return contains(S, B, a); });
}

std::size_t intersection_dim(const QuadSpace& S, const Subspace& A, const Subspace& B) {
    std::vector<Vec4> all = A.basis;
    all.insert(all.end(), B.basis.begin(), B.basis.end());
    return A.dim() + B.dim() - span(S, all).dim();
}

Fe gram_det(const QuadSpace& S, const Subspace& U) {
    const Field& F = S.field();
    const std::size_t d = U.dim();
    // Small determinants by cofactor expansion.
    auto g = [&](std::size_t i, std::size_t j) { return U.gram[i * d + j]; };
    if (d == 0) return F.one();
    if (d == 1) return g(0, 0);
    if (d == 2) return F.sub(F.mul(g(0, 0), g(1, 1)), F.mul(g(0, 1), g(1, 0)));
    if (d == 3) {
        auto m2 = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
            return F.sub(F.mul(g(1, a), g(2, b)), F.mul(g(1, c), g(2, e)));
        };
        return F.add(F.sub(F.mul(g(0, 0), m2(1, 2, 2, 1)), F.mul(g(0, 1), m2(0, 2, 2, 0))),
                     F.mul(g(0, 2), m2(0, 1, 1, 0)));
    }
    Mat4 m{};
    std::copy(U.gram.begin(), U.gram.end(), m.begin());
    return det4(F, m);
}

bool is_degenerate(const QuadSpace& S, const Subspace& U) { return gram_det(S, U) == S.field().zero(); }

std::string to_string(TwoSpaceType t) {
    switch (t) {
        case TwoSpaceType::Plus: return "plus";
        case TwoSpaceType::Minus: return "minus";
        case TwoSpaceType::Degenerate: return "degenerate";
    }
    return "?";
}

std::uint32_t isotropic_points(const QuadSpace& S, const Subspace& U) {
    if (U.dim() != 2) throw UsageError("isotropic_points expects a 2-space");
    const Field& F = S.field();
    std::uint32_t count = S.quad(U.basis[1]) == F.zero() ? 1 : 0;
    for (std::uint32_t t = 0; t < F.size(); ++t) {
        Vec4 x{};
        for (int i = 0; i < 4; ++i) x[i] = F.add(U.basis[0][i], F.mul(Fe{t}, U.basis[1][i]));
        if (S.quad(x) == F.zero()) ++count;
    }
    return count;
}

TwoSpaceType classify_2space(const QuadSpace& S, const Subspace& U) {
    if (U.dim() != 2) throw UsageError("classify_2space expects a 2-space, got dimension " + std::to_string(U.dim()));
    const Field& F = S.field();
    const Fe d = gram_det(S, U);
    TwoSpaceType t = TwoSpaceType::Degenerate;
    std::uint32_t expected = 1;
    if (d != F.zero()) {
        const bool plus = F.is_square(F.neg(d));
        t = plus ? TwoSpaceType::Plus : TwoSpaceType::Minus;
        expected = plus ? 2 : 0;
    }
    if (isotropic_points(S, U) != expected) throw InternalError("2-space type rule disagrees with isotropic count");
    return t;
}

std::vector<Subspace> two_spaces_of(const QuadSpace& S, const Subspace& W) {
    if (W.dim() != 3) throw UsageError("two_spaces_of expects a 3-space");
    const Field& F = S.field();
    std::vector<Subspace> out;
    // Each 2-space is the kernel of a projective normal (n0 : n1 : n2) on coefficients.
    const std::uint32_t q = F.size();
    for (std::uint32_t code = 1; code < q * q * q; ++code) {
        const Row n{Fe{code / (q * q)}, Fe{(code / q) % q}, Fe{code % q}};
        const auto lead = std::find_if(n.begin(), n.end(), [&](Fe x) { return x != F.zero(); });
        if (*lead != F.one()) continue;
        std::vector<Vec4> vecs;
        for (const auto& c : kernel(F, {n}, 3)) {
            Vec4 x{};
            for (int i = 0; i < 4; ++i) {
                Fe s = F.zero();
                for (int k = 0; k < 3; ++k) s = F.add(s, F.mul(c[k], W.basis[k][i]));
                x[i] = s;
            }
            vecs.push_back(x);
        }
        out.push_back(span(S, vecs));
    }
    return out;
}

Census census_2spaces(const QuadSpace& S, const Subspace& W) {
    if (W.dim() != 3 || is_degenerate(S, W)) throw UsageError("census needs a non-degenerate 3-space");
    Census c;
    for (const auto& U : two_spaces_of(S, W)) {
        switch (classify_2space(S, U)) {
            case TwoSpaceType::Plus: ++c.plus; break;
            case TwoSpaceType::Minus: ++c.minus; break;
            case TwoSpaceType::Degenerate: ++c.degenerate; break;
        }
    }
    return c;
}

// ---- the isomorphism --------------------------------------------------------

KLIsomorphism KLIsomorphism::build(std::uint32_t q, std::uint64_t cap) {
    if (!ff::is_prime(q) || q == 2) throw UsageError("the orthogonal model needs q an odd prime, got " + std::to_string(q));
    if (q > 13) throw UsageError("the orthogonal model is limited to q <= 13");
    const Field F2 = Field::build(q, 2);
    KLIsomorphism K(GroupIndex::enumerate(F2, cap), QuadSpace::build_minus(q));
    const Field& Fq = K.space_.field();

    K.lambda_ = F2.root();
    if (F2.subfield_degree(K.lambda_) != 2) throw InternalError("lambda lies in the prime field");

    // Prime-field coordinate of a GF(q^2) element known to lie in GF(q).
    auto down = [&](Fe a) {
        const auto c = F2.coeffs(a);
        if (c[1] != 0) throw InternalError("value outside the prime field");
        return Fe{c[0]};
    };
    const Fe lam = K.lambda_, lam_bar = F2.frobenius(K.lambda_);
    const Fe O = F2.zero(), I = F2.one();
    const std::array<psl2::Mat2, 4> basis{{{{I, O, O, O}}, {{O, O, O, I}}, {{O, I, I, O}}, {{O, lam, lam_bar, O}}}};
    auto det2 = [&](const psl2::Mat2& h) { return psl2::det(F2, h); };
    auto add2 = [&](const psl2::Mat2& a, const psl2::Mat2& b) {
        return psl2::Mat2{{F2.add(a.e[0], b.e[0]), F2.add(a.e[1], b.e[1]), F2.add(a.e[2], b.e[2]), F2.add(a.e[3], b.e[3])}};
    };
    const Fe half = Fq.inv(Fq.from_int(2));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const Fe polar = F2.sub(F2.sub(det2(add2(basis[i], basis[j])), det2(basis[i])), det2(basis[j]));
            K.tensor_gram_[i * 4 + j] = Fq.mul(down(polar), half);
        }
    }

    // Diagonal frame: successive orthogonal vectors with the target norms.
    const Mat4& D = K.space_.gram();
    const auto T = QuadSpace::from_gram(Fq, K.tensor_gram_);
    if (!T.is_minus_type()) throw InternalError("tensor form is not of minus type");
    std::vector<Vec4> found;
    for (int k = 0; k < 3; ++k) {
        const Fe target = D[k * 5];
        bool ok = false;
        for (std::uint32_t code = 1; code < power4(q) && !ok; ++code) {
            const Vec4 x = vec_from_code(Fq, code);
            if (T.quad(x) != target) continue;
            if (std::any_of(found.begin(), found.end(), [&](const Vec4& y) { return T.form(x, y) != Fq.zero(); })) continue;
            found.push_back(x);
            ok = true;
        }
        if (!ok) throw InternalError("no vector of the required norm in the tensor space");
    }
    {
        const auto rest = perp(T, span(T, found));
        Vec4 w = rest.basis.at(0);
        const Fe c = T.quad(w);
        const auto s = Fq.sqrt(Fq.div(D[15], c));
        if (!s) throw InternalError("tensor form and diagonal form are not isometric");
        for (auto& x : w) x = Fq.mul(x, *s);
        found.push_back(w);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) K.frame_[i * 4 + j] = found[j][i];
    K.frame_inv_ = inverse4(Fq, K.frame_);
    if (mul4(Fq, transpose4(K.frame_), mul4(Fq, K.tensor_gram_, K.frame_)) != D) {
        throw InternalError("frame does not carry the tensor form to the diagonal form");
    }

    K.images_.reserve(K.G_.order());
    for (std::size_t i = 0; i < K.G_.order(); ++i) {
        K.images_.push_back(K.apply(K.G_.element(static_cast<Index>(i))));
        if (!K.preimage_.emplace(K.pack(K.images_.back()), static_cast<Index>(i)).second) {
            throw InternalError("the map is not injective on PSL_2(q^2)");
        }
    }
    return K;
}

Mat4 KLIsomorphism::apply_tensor(const psl2::Mat2& g) const {
    const Field& F2 = big_field();
    const Fe lam = lambda_, lam_bar = F2.frobenius(lambda_);
    const Fe O = F2.zero(), I = F2.one();
    const std::array<psl2::Mat2, 4> basis{{{{I, O, O, O}}, {{O, O, O, I}}, {{O, I, I, O}}, {{O, lam, lam_bar, O}}}};
    const psl2::Mat2 gbar_t{{F2.frobenius(g.e[0]), F2.frobenius(g.e[2]), F2.frobenius(g.e[1]), F2.frobenius(g.e[3])}};
    Mat4 m{};
    for (int j = 0; j < 4; ++j) {
        const psl2::Mat2 h = psl2::mul(F2, psl2::mul(F2, g, basis[j]), gbar_t);
        const auto a = F2.coeffs(h.e[0]), d = F2.coeffs(h.e[3]), z = F2.coeffs(h.e[1]);
        if (a[1] != 0 || d[1] != 0 || h.e[2] != F2.frobenius(h.e[1])) throw InternalError("image is not Hermitian");
        // z = alpha + beta * lambda with lambda = x
        m[0 * 4 + j] = Fe{a[0]};
        m[1 * 4 + j] = Fe{d[0]};
        m[2 * 4 + j] = Fe{z[0]};
        m[3 * 4 + j] = Fe{z[1]};
    }
    return m;
}

Mat4 KLIsomorphism::apply(const psl2::Mat2& g) const {
    const Field& Fq = small_field();
    return mul4(Fq, frame_inv_, mul4(Fq, apply_tensor(g), frame_));
}

std::uint64_t KLIsomorphism::pack(const Mat4& m) const {
    std::uint64_t key = 0;
    for (Fe x : m) key = key * q() + x.code;
    return key;
}

std::optional<Index> KLIsomorphism::preimage(const Mat4& m) const {
    const auto it = preimage_.find(pack(m));
    if (it == preimage_.end()) return std::nullopt;
    return it->second;
}

// ---- eigenspaces and the geometric coclique ---------------------------------

std::vector<Eigenspace> eigenspaces(const QuadSpace& S, const Mat4& g) {
    const Field& F = S.field();
    std::vector<Eigenspace> out;
    for (std::uint32_t c = 1; c < F.size(); ++c) {
        std::vector<Row> rows(4, Row(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rows[i][j] = i == j ? F.sub(g[i * 4 + j], Fe{c}) : g[i * 4 + j];
        const auto ker = kernel(F, rows, 4);
        if (ker.empty()) continue;
        std::vector<Vec4> vecs;
        for (const auto& k : ker) vecs.push_back(to_vec(k));
        out.push_back({Fe{c}, span(S, vecs)});
    }
    return out;
}

Vec4 canonical_v(const Field& F) { return Vec4{F.one(), F.zero(), F.zero(), F.zero()}; }

Subspace v_perp(const QuadSpace& S, const Vec4& v) {
    if (S.quad(v) == S.field().zero()) throw UsageError("v must be non-isotropic");
    const Vec4 one[1] = {v};
    return perp(S, span(S, one));
}

std::vector<Index> eigenspace_elements(const KLIsomorphism& iso, const Subspace& U, const Vec4& v) {
    const QuadSpace& S = iso.space();
    const Field& F = S.field();
    const auto vp = v_perp(S, v);
    if (U.dim() != 2 || !is_subspace_of(S, U, vp)) throw UsageError("U must be a 2-space inside v-perp");
    const Mat4 id = identity4(F);
    std::vector<Index> out;

    if (is_degenerate(S, U)) {
        for (std::size_t i = 0; i < iso.group().order(); ++i) {
            const Mat4& g = iso.image(static_cast<Index>(i));
            if (g == id) continue;
            if (apply4(F, g, U.basis[0]) == U.basis[0] && apply4(F, g, U.basis[1]) == U.basis[1]) {
                out.push_back(static_cast<Index>(i));
            }
        }
        return out;
    }

    const auto W = perp(S, U);
    // P has columns u1, u2, w1, w2.
    Mat4 P{};
    const std::array<Vec4, 4> cols{U.basis[0], U.basis[1], W.basis[0], W.basis[1]};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) P[i * 4 + j] = cols[j][i];
    const Mat4 Pinv = inverse4(F, P);
    const std::uint32_t q = F.size();
    for (std::uint32_t code = 0; code < power4(q); ++code) {
        const Vec4 r = vec_from_code(F, code);  // [[r0, r1], [r2, r3]] on W
        if (F.sub(F.mul(r[0], r[3]), F.mul(r[1], r[2])) != F.one()) continue;
        // r preserves the form on W: (r w_i, r w_j) = (w_i, w_j)
        auto rw = [&](int k) {
            Vec4 x{};
            for (int t = 0; t < 4; ++t) x[t] = F.add(F.mul(r[k], W.basis[0][t]), F.mul(r[2 + k], W.basis[1][t]));
            return x;
        };
        const Vec4 a = rw(0), b = rw(1);
        if (S.form(a, a) != W.gram[0] || S.form(a, b) != W.gram[1] || S.form(b, b) != W.gram[3]) continue;
        for (const Fe eps : {F.one(), F.neg(F.one())}) {
            Mat4 block{};
            block.fill(F.zero());
            block[0] = eps;
            block[5] = eps;
            block[10] = r[0];
            block[11] = r[1];
            block[14] = r[2];
            block[15] = r[3];
            const Mat4 g = mul4(F, P, mul4(F, block, Pinv));
            if (g == id) continue;
            if (const auto idx = iso.preimage(g)) out.push_back(*idx);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t geometric_size(std::uint64_t q) { return q * q * q + q - 1; }

GeometricCoclique build_geometric_coclique(const KLIsomorphism& iso, const Vec4& v) {
    if (iso.q() <= 3) throw UsageError("the geometric coclique needs q > 3");
    const QuadSpace& S = iso.space();
    const auto vp = v_perp(S, v);
    GeometricCoclique C;
    C.q = iso.q();
    C.v = v;
    C.census = census_2spaces(S, vp);
    std::size_t total = 0;
    for (auto& U : two_spaces_of(S, vp)) {
        GeometricPart part{U, classify_2space(S, U), eigenspace_elements(iso, U, v)};
        total += part.elements.size();
        C.members.insert(C.members.end(), part.elements.begin(), part.elements.end());
        C.parts.push_back(std::move(part));
    }
    std::sort(C.members.begin(), C.members.end());
    C.members.erase(std::unique(C.members.begin(), C.members.end()), C.members.end());
    C.parts_disjoint = total == C.members.size();
    return C;
}

GeometricCoclique build_geometric_coclique(const KLIsomorphism& iso) {
    return build_geometric_coclique(iso, canonical_v(iso.small_field()));
}

std::vector<Index> definitional_members(const KLIsomorphism& iso, const Vec4& v) {
    const QuadSpace& S = iso.space();
    const auto vp = v_perp(S, v);
    const Mat4 id = identity4(S.field());
    std::vector<Index> out;
    for (std::size_t i = 0; i < iso.group().order(); ++i) {
        const Mat4& g = iso.image(static_cast<Index>(i));
        if (g == id) continue;
        for (const auto& e : eigenspaces(S, g)) {
            if (e.space.dim() == 2 && is_subspace_of(S, e.space, vp)) {
                out.push_back(static_cast<Index>(i));
                break;
            }
        }
    }
    return out;
}

std::vector<EigenProfileEntry> eigen_profile(const KLIsomorphism& iso, Index g, const Subspace& vp) {
    std::vector<EigenProfileEntry> out;
    for (const auto& e : eigenspaces(iso.space(), iso.image(g))) {
        out.push_back({e.value, e.space.dim(), intersection_dim(iso.space(), e.space, vp)});
    }
    return out;
}

bool meets_finallem_hypothesis(std::span<const EigenProfileEntry> profile) {
    return std::all_of(profile.begin(), profile.end(), [](const auto& e) { return e.dim_in_vperp <= 1; });
}

}  // namespace psl2lab::ortho4
