#include "psl2lab/ff.hpp"

#include <algorithm>

#include "psl2lab/errors.hpp"

namespace psl2lab::ff {

namespace {

using Poly = std::vector<std::uint32_t>;  // constant term first

std::uint32_t ipow(std::uint32_t b, std::uint32_t e) {
    std::uint32_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo monic g over GF(p).
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const std::uint32_t lead = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t i = 0; i <= dg; ++i) {
            f[shift + i] = (f[shift + i] + (p - lead) * g[i]) % p;
        }
        trim(f);
    }
    return f;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::uint32_t n = static_cast<std::uint32_t>(f.size() - 1);
    for (std::uint32_t d = 1; 2 * d <= n; ++d) {
        // Trial division by every monic polynomial of degree d.
        const std::uint32_t count = ipow(p, d);
        for (std::uint32_t k = 0; k < count; ++k) {
            Poly g(d + 1, 0);
            std::uint32_t t = k;
            for (std::uint32_t i = 0; i < d; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

// Monic polynomials of degree n in lexicographic order, constant term first.
Poly smallest_irreducible(std::uint32_t p, std::uint32_t n) {
    const std::uint32_t count = ipow(p, n);
    for (std::uint32_t k = 0; k < count; ++k) {
        Poly f(n + 1, 0);
        std::uint32_t t = k;
        for (std::uint32_t i = n; i-- > 0;) {
            f[i] = t % p;
            t /= p;
        }
        // f[0] (the constant term) is the most significant digit of k.
        f[n] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw InternalError("no irreducible polynomial found");
}

struct Codec {
    std::uint32_t p;
    std::uint32_t n;

    std::uint32_t encode(const Poly& c) const {
        std::uint32_t code = 0;
        for (std::uint32_t i = 0; i < n; ++i) code = code * p + (i < c.size() ? c[i] : 0);
        return code;
    }
    Poly decode(std::uint32_t code) const {
        Poly c(n, 0);
        for (std::uint32_t i = n; i-- > 0;) {
            c[i] = code % p;
            code /= p;
        }
        return c;
    }
};

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

Field Field::build(std::uint32_t p, std::uint32_t n) {
    if (!is_prime(p)) throw UsageError("field characteristic " + std::to_string(p) + " is not prime");
    if (p == 2) throw UsageError("even characteristic is not supported");
    if (n < 1 || n > 4) throw UsageError("extension degree must lie in [1, 4]");
    if (std::uint64_t{ipow(p, n)} > (1u << 24) || p > 65521) throw UsageError("field too large");

    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->n = n;
    impl->q = ipow(p, n);
    impl->modulus = smallest_irreducible(p, n);
    const std::uint32_t q = impl->q;
    const Codec codec{p, n};

    impl->one = codec.encode(Poly{1});
    impl->root = codec.encode(poly_mod(Poly{0, 1}, impl->modulus, p));

    auto add_codes = [&](std::uint32_t a, std::uint32_t b) {
        Poly x = codec.decode(a), y = codec.decode(b);
        for (std::uint32_t i = 0; i < n; ++i) x[i] = (x[i] + y[i]) % p;
        return codec.encode(x);
    };
    auto mul_codes = [&](std::uint32_t a, std::uint32_t b) {
        const Poly x = codec.decode(a), y = codec.decode(b);
        Poly prod(2 * n - 1, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t j = 0; j < n; ++j) {
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{x[i]} * y[j]) % p);
            }
        }
        return codec.encode(poly_mod(prod, impl->modulus, p));
    };

    impl->neg_tab.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
        Poly x = codec.decode(a);
        for (auto& c : x) c = (p - c) % p;
        impl->neg_tab[a] = codec.encode(x);
    }

    // Multiplicative generator: smallest code whose order is q - 1.
    std::vector<std::uint32_t> prime_factors;
    {
        std::uint32_t m = q - 1;
        for (std::uint32_t d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                prime_factors.push_back(d);
                while (m % d == 0) m /= d;
            }
        }
        if (m > 1) prime_factors.push_back(m);
    }
    auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
        std::uint32_t r = impl->one;
        while (e > 0) {
            if (e & 1u) r = mul_codes(r, a);
            a = mul_codes(a, a);
            e >>= 1u;
        }
        return r;
    };
    std::uint32_t gen = 0;
    for (std::uint32_t a = 1; a < q; ++a) {
        const bool primitive = std::all_of(prime_factors.begin(), prime_factors.end(),
                                           [&](std::uint32_t r) { return slow_pow(a, (q - 1) / r) != impl->one; });
        if (primitive) {
            gen = a;
            break;
        }
    }
    if (gen == 0 && q > 2) throw InternalError("no primitive element");

    impl->exp_tab.resize(2 * (q - 1));
    impl->log_tab.assign(q, 0);
    std::uint32_t x = impl->one;
    for (std::uint32_t k = 0; k < q - 1; ++k) {
        impl->exp_tab[k] = x;
        impl->exp_tab[k + q - 1] = x;
        impl->log_tab[x] = k;
        x = mul_codes(x, gen);
    }

    impl->tables = q <= 512;
    if (impl->tables) {
        impl->add_tab.resize(std::size_t{q} * q);
        impl->mul_tab.resize(std::size_t{q} * q);
        for (std::uint32_t a = 0; a < q; ++a) {
            for (std::uint32_t b = 0; b < q; ++b) {
                impl->add_tab[a * q + b] = add_codes(a, b);
                impl->mul_tab[a * q + b] =
                    (a == 0 || b == 0) ? 0 : impl->exp_tab[impl->log_tab[a] + impl->log_tab[b]];
            }
        }
    }

    impl->sqrt_tab.assign(q, kNoRoot);
    for (std::uint32_t b = 0; b < q; ++b) {
        const std::uint32_t sq = b == 0 ? 0 : impl->exp_tab[(2 * impl->log_tab[b]) % (q - 1)];
        if (impl->sqrt_tab[sq] == kNoRoot) impl->sqrt_tab[sq] = b;
    }
    for (std::uint32_t a = 1; a < q; ++a) {
        if (impl->sqrt_tab[a] == kNoRoot) {
            impl->non_square = a;
            break;
        }
    }

    impl->subfield_deg.assign(q, n);
    for (std::uint32_t a = 0; a < q; ++a) {
        for (std::uint32_t d = 1; d <= n; ++d) {
            if (n % d != 0) continue;
            if (a == 0 || slow_pow(a, ipow(p, d)) == a) {
                impl->subfield_deg[a] = d;
                break;
            }
        }
    }

    return Field(std::move(impl));
}

std::uint32_t Field::add_slow(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t p = impl_->p;
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < impl_->n; ++i) {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    return out;
}

Fe Field::from_int(std::int64_t k) const {
    const std::int64_t p = impl_->p;
    const auto r = static_cast<std::uint32_t>(((k % p) + p) % p);
    return Fe{r * (impl_->one)};
}

Fe Field::from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() > impl_->n) throw UsageError("too many coefficients for field degree");
    std::uint32_t code = 0;
    for (std::uint32_t i = 0; i < impl_->n; ++i) {
        const std::uint32_t ci = i < c.size() ? c[i] : 0;
        if (ci >= impl_->p) throw UsageError("coefficient out of range");
        code = code * impl_->p + ci;
    }
    return Fe{code};
}

std::vector<std::uint32_t> Field::coeffs(Fe a) const {
    std::vector<std::uint32_t> c(impl_->n, 0);
    std::uint32_t code = a.code;
    for (std::uint32_t i = impl_->n; i-- > 0;) {
        c[i] = code % impl_->p;
        code /= impl_->p;
    }
    return c;
}

Fe Field::element(std::uint32_t code) const {
    if (code >= impl_->q) throw UsageError("field element code out of range");
    return Fe{code};
}

Fe Field::inv(Fe a) const {
    if (a.code == 0) throw UsageError("inverse of zero");
    const std::uint32_t order = impl_->q - 1;
    return Fe{impl_->exp_tab[(order - impl_->log_tab[a.code]) % order]};
}

Fe Field::pow(Fe a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a.code == 0) return zero();
    const std::uint64_t order = impl_->q - 1;
    return Fe{impl_->exp_tab[(impl_->log_tab[a.code] * (e % order)) % order]};
}

std::optional<Fe> Field::sqrt(Fe a) const {
    const std::uint32_t r = impl_->sqrt_tab[a.code];
    if (r == kNoRoot) return std::nullopt;
    return Fe{r};
}

std::string Field::to_string(Fe a) const {
    if (impl_->n == 1) return std::to_string(a.code);
    const auto c = coeffs(a);
    std::string s;
    for (std::uint32_t i = 0; i < impl_->n; ++i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(c[i]);
        } else {
            if (c[i] != 1) s += std::to_string(c[i]);
            s += i == 1 ? "x" : "x^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

}  // namespace psl2lab::ff
