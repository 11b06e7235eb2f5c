#pragma once

// Orthogonal geometry of a 4-dimensional minus-type space over GF(q), q an
// odd prime, and PSL_2(q^2) realized inside it as Omega_4^-(q).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "psl2lab/ff.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::ortho4 {

using ff::Fe;
using ff::Field;
using psl2::GroupIndex;
using psl2::Index;

using Vec4 = std::array<Fe, 4>;
using Mat4 = std::array<Fe, 16>;  // row-major

Mat4 identity4(const Field& F);
Mat4 mul4(const Field& F, const Mat4& a, const Mat4& b);
Mat4 transpose4(const Mat4& a);
Vec4 apply4(const Field& F, const Mat4& a, const Vec4& x);
Fe det4(const Field& F, const Mat4& a);
// Throws InternalError on a singular matrix.
Mat4 inverse4(const Field& F, const Mat4& a);

// Symmetric bilinear form given by its Gram matrix.
class QuadSpace {
  public:
    // Gram diag(1, -1, 1, -delta), delta the smallest non-square, certified
    // minus type; falls back to scanning other last entries if needed.
    static QuadSpace build_minus(std::uint32_t q);
    static QuadSpace from_gram(const Field& F, const Mat4& gram);

    const Field& field() const { return F_; }
    std::uint32_t q() const { return F_.size(); }
    const Mat4& gram() const { return gram_; }
    Fe form(const Vec4& x, const Vec4& y) const;
    // Q(x) = (x, x); the factor 1/2 is irrelevant for singularity and type.
    Fe quad(const Vec4& x) const { return form(x, x); }
    // Number of nonzero x with Q(x) = 0, counted exhaustively.
    std::uint64_t singular_count() const { return singular_; }
    bool is_minus_type() const;

  private:
    QuadSpace(Field F, Mat4 gram);
    Field F_;
    Mat4 gram_;
    std::uint64_t singular_ = 0;
};

std::uint64_t minus_type_singular_count(std::uint64_t q);  // (q^2 + 1)(q - 1)
std::uint64_t plus_type_singular_count(std::uint64_t q);   // (q^2 - 1)(q + 1)

// A subspace as reduced row echelon basis rows together with its Gram data.
struct Subspace {
    std::vector<Vec4> basis;
    std::vector<Fe> gram;  // dim x dim, row-major

    std::size_t dim() const { return basis.size(); }
    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis == b.basis; }
};

Subspace span(const QuadSpace& S, std::span<const Vec4> vectors);
Subspace perp(const QuadSpace& S, const Subspace& U);
bool contains(const QuadSpace& S, const Subspace& U, const Vec4& x);
bool is_subspace_of(const QuadSpace& S, const Subspace& A, const Subspace& B);
std::size_t intersection_dim(const QuadSpace& S, const Subspace& A, const Subspace& B);
// Determinant of the restricted Gram matrix.
Fe gram_det(const QuadSpace& S, const Subspace& U);
bool is_degenerate(const QuadSpace& S, const Subspace& U);

enum class TwoSpaceType { Plus, Minus, Degenerate };
std::string to_string(TwoSpaceType t);

// Isotropic 1-spaces of a 2-space, counted exhaustively.
std::uint32_t isotropic_points(const QuadSpace& S, const Subspace& U);
// Plus iff -det is a nonzero square; cross-checked against the isotropic
// point count (plus 2, minus 0, degenerate 1).  Throws on dim != 2.
TwoSpaceType classify_2space(const QuadSpace& S, const Subspace& U);

// All 2-dimensional subspaces of a 3-space W.
std::vector<Subspace> two_spaces_of(const QuadSpace& S, const Subspace& W);

struct Census {
    std::uint64_t minus = 0;
    std::uint64_t plus = 0;
    std::uint64_t degenerate = 0;
    std::uint64_t total() const { return minus + plus + degenerate; }
};
Census census_2spaces(const QuadSpace& S, const Subspace& W);

// The Kleidman-Liebeck map SL_2(q^2) -> Omega_4^-(q), g -> g (x) g-bar, in the
// F_q-basis u1 = v1(x)v1, u2 = v2(x)v2, w1 = v1(x)v2 + v2(x)v1,
// w2 = lambda v1(x)v2 + lambda-bar v2(x)v1 of the "Hermitian" tensors, then
// moved into the diagonal frame of QuadSpace::build_minus.
class KLIsomorphism {
  public:
    static KLIsomorphism build(std::uint32_t q, std::uint64_t cap = psl2::kDefaultEnumerationCap);

    const GroupIndex& group() const { return G_; }
    const Field& big_field() const { return G_.field(); }
    const Field& small_field() const { return space_.field(); }
    const QuadSpace& space() const { return space_; }
    std::uint32_t q() const { return space_.q(); }
    Fe lambda() const { return lambda_; }
    // Gram of the bilinear form associated with det on the tensor basis.
    const Mat4& tensor_gram() const { return tensor_gram_; }
    // Columns: the diagonal-frame basis vectors in tensor coordinates.
    const Mat4& frame() const { return frame_; }

    Mat4 apply_tensor(const psl2::Mat2& g) const;
    Mat4 apply(const psl2::Mat2& g) const;
    const Mat4& image(Index i) const { return images_[i]; }
    std::optional<Index> preimage(const Mat4& m) const;

  private:
    KLIsomorphism(GroupIndex G, QuadSpace space) : G_(std::move(G)), space_(std::move(space)) {}
    std::uint64_t pack(const Mat4& m) const;

    GroupIndex G_;
    QuadSpace space_;
    Fe lambda_{};
    Mat4 tensor_gram_{};
    Mat4 frame_{};
    Mat4 frame_inv_{};
    std::vector<Mat4> images_;
    std::unordered_map<std::uint64_t, Index> preimage_;
};

struct Eigenspace {
    Fe value;
    Subspace space;
};
// Every eigenvalue in GF(q)* with its eigenspace (nonzero kernels only).
std::vector<Eigenspace> eigenspaces(const QuadSpace& S, const Mat4& g);

// v = e1 of the diagonal frame (Q(v) = 1).
Vec4 canonical_v(const Field& F);
// v-perp for a non-isotropic v; throws UsageError when Q(v) = 0.
Subspace v_perp(const QuadSpace& S, const Vec4& v);

// Non-identity elements (as group indices) having U inside an eigenspace, per
// the block recipe: for degenerate U the pointwise stabilizer; otherwise the
// elements acting as +-I on U and as a rotation in SO(U-perp), kept when they
// lie in the image.  Throws UsageError unless U is a 2-space inside v-perp.
std::vector<Index> eigenspace_elements(const KLIsomorphism& iso, const Subspace& U, const Vec4& v);

struct GeometricPart {
    Subspace U;
    TwoSpaceType type;
    std::vector<Index> elements;  // non-identity
};

struct GeometricCoclique {
    std::uint32_t q = 0;
    Vec4 v{};
    std::vector<GeometricPart> parts;
    std::vector<Index> members;  // union of the parts, sorted
    Census census;
    bool parts_disjoint = false;

    std::size_t size() const { return members.size(); }
    std::size_t size_with_identity() const { return members.size() + 1; }
};

// q^3 + q - 1, the count without the identity.
std::uint64_t geometric_size(std::uint64_t q);

// Throws UsageError for q <= 3 or isotropic v.
GeometricCoclique build_geometric_coclique(const KLIsomorphism& iso, const Vec4& v);
GeometricCoclique build_geometric_coclique(const KLIsomorphism& iso);

// Definitional scan: every non-identity element with a 2-dimensional
// eigenspace contained in v-perp.
std::vector<Index> definitional_members(const KLIsomorphism& iso, const Vec4& v);

struct EigenProfileEntry {
    Fe value;
    std::size_t dim = 0;
    std::size_t dim_in_vperp = 0;
};
std::vector<EigenProfileEntry> eigen_profile(const KLIsomorphism& iso, Index g, const Subspace& vp);
// No eigenspace meets v-perp in 2 or more dimensions.
bool meets_finallem_hypothesis(std::span<const EigenProfileEntry> profile);

}  // namespace psl2lab::ortho4
