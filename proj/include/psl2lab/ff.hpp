#pragma once

// Exact arithmetic in GF(p^n) for small odd p.
//
// Elements are stored as a single integer code: the coefficient vector
// (c0, c1, ..., c_{n-1}) of the polynomial c0 + c1 x + ... in base p with c0
// as the most significant digit.  Integer order on codes is therefore the
// lexicographic order on coefficient vectors (constant term first), which is
// the global tie-breaking order used throughout the library.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psl2lab::ff {

struct Fe {
    std::uint32_t code = 0;

    friend constexpr auto operator<=>(Fe, Fe) = default;
};

bool is_prime(std::uint64_t n);

class Field {
  public:
    // ff_build: the modulus is the lexicographically smallest monic
    // irreducible of degree n (constant term compared first).
    static Field build(std::uint32_t p, std::uint32_t n);

    std::uint32_t characteristic() const { return impl_->p; }
    std::uint32_t degree() const { return impl_->n; }
    std::uint32_t size() const { return impl_->q; }
    // n + 1 coefficients, constant term first, leading coefficient 1.
    const std::vector<std::uint32_t>& modulus() const { return impl_->modulus; }

    Fe zero() const { return Fe{0}; }
    Fe one() const { return Fe{impl_->one}; }
    // Residue k mod p, embedded in the prime subfield.
    Fe from_int(std::int64_t k) const;
    Fe from_coeffs(std::span<const std::uint32_t> coeffs) const;
    std::vector<std::uint32_t> coeffs(Fe a) const;
    // The class of x modulo the modulus.
    Fe root() const { return Fe{impl_->root}; }
    Fe element(std::uint32_t code) const;

    Fe add(Fe a, Fe b) const {
        return Fe{impl_->tables ? impl_->add_tab[a.code * impl_->q + b.code] : add_slow(a.code, b.code)};
    }
    Fe neg(Fe a) const { return Fe{impl_->neg_tab[a.code]}; }
    Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
    Fe mul(Fe a, Fe b) const {
        if (impl_->tables) return Fe{impl_->mul_tab[a.code * impl_->q + b.code]};
        if (a.code == 0 || b.code == 0) return Fe{0};
        return Fe{impl_->exp_tab[impl_->log_tab[a.code] + impl_->log_tab[b.code]]};
    }
    // ff_inv; throws UsageError on zero.
    Fe inv(Fe a) const;
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
    Fe pow(Fe a, std::uint64_t e) const;

    // a -> a^p.  For n = 2 this is the involutory automorphism of GF(p^2).
    Fe frobenius(Fe a) const { return pow(a, impl_->p); }

    // ff_is_square; 0 counts as a square.
    bool is_square(Fe a) const { return impl_->sqrt_tab[a.code] != kNoRoot; }
    // ff_sqrt: the smallest root (by code) when a is a square.
    std::optional<Fe> sqrt(Fe a) const;
    // Smallest non-square under the code order.
    Fe non_square() const { return Fe{impl_->non_square}; }
    // A generator of the multiplicative group (smallest by code).
    Fe primitive() const { return Fe{impl_->exp_tab[1]}; }
    // Smallest d dividing n such that a lies in GF(p^d).
    std::uint32_t subfield_degree(Fe a) const { return impl_->subfield_deg[a.code]; }
    bool in_subfield(Fe a, std::uint32_t d) const { return d % subfield_degree(a) == 0; }

    std::string to_string(Fe a) const;

    bool operator==(const Field& other) const {
        return impl_ == other.impl_ || (size() == other.size() && modulus() == other.modulus());
    }

  private:
    static constexpr std::uint32_t kNoRoot = 0xffffffffu;

    struct Impl {
        std::uint32_t p = 0;
        std::uint32_t n = 0;
        std::uint32_t q = 0;
        std::uint32_t one = 0;
        std::uint32_t root = 0;
        std::uint32_t non_square = 0;
        std::vector<std::uint32_t> modulus;
        bool tables = false;
        std::vector<std::uint32_t> add_tab;
        std::vector<std::uint32_t> mul_tab;
        std::vector<std::uint32_t> neg_tab;
        std::vector<std::uint32_t> exp_tab;  // length 2(q-1)
        std::vector<std::uint32_t> log_tab;
        std::vector<std::uint32_t> sqrt_tab;
        std::vector<std::uint32_t> subfield_deg;
    };

    explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::uint32_t add_slow(std::uint32_t a, std::uint32_t b) const;

    std::shared_ptr<const Impl> impl_;
};

}  // namespace psl2lab::ff
