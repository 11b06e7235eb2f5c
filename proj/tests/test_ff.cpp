#include <set>

#include "doctest.h"
#include "psl2lab/errors.hpp"
#include "psl2lab/ff.hpp"

using namespace psl2lab;
using ff::Fe;
using ff::Field;

namespace {

// Schoolbook arithmetic on coefficient vectors, independent of the tables.
using Poly = std::vector<std::uint32_t>;

Poly naive_mul(const Poly& x, const Poly& y, const Poly& mod, std::uint32_t p) {
    const std::size_t n = mod.size() - 1;
    Poly prod(2 * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    for (std::size_t k = 2 * n - 1; k >= n; --k) {
        const std::uint32_t c = prod[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - c) * mod[i]) % p;
    }
    prod.resize(n);
    return prod;
}

bool has_root(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    for (std::uint32_t x = 0; x < p; ++x)
        if ((x * x + b * x + a) % p == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("field construction") {
    const auto F7 = Field::build(7, 1);
    CHECK(F7.size() == 7);
    CHECK(F7.modulus() == std::vector<std::uint32_t>{0, 1});
    const auto F9 = Field::build(3, 2);
    CHECK(F9.size() == 9);
    CHECK(F9.modulus() == std::vector<std::uint32_t>{1, 0, 1});
    CHECK_THROWS_AS(Field::build(9, 1), UsageError);
    CHECK_THROWS_AS(Field::build(2, 1), UsageError);
    CHECK_THROWS_AS(Field::build(5, 5), UsageError);
    CHECK_THROWS_AS(Field::build(5, 0), UsageError);
}

TEST_CASE("quadratic modulus is the smallest irreducible") {
    for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
        // constant term compared first, then the linear one
        std::vector<std::uint32_t> expected;
        for (std::uint32_t a = 0; a < p && expected.empty(); ++a)
            for (std::uint32_t b = 0; b < p && expected.empty(); ++b)
                if (!has_root(a, b, p)) expected = {a, b, 1};
        CHECK(Field::build(p, 2).modulus() == expected);
    }
    CHECK(Field::build(5, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
}

TEST_CASE("inverses") {
    const auto F7 = Field::build(7, 1);
    CHECK(F7.inv(F7.one()) == F7.one());
    CHECK(F7.inv(F7.from_int(2)) == F7.from_int(4));
    CHECK_THROWS_AS(F7.inv(F7.zero()), UsageError);
    const auto F9 = Field::build(3, 2);
    const std::uint32_t x[] = {0, 1}, two_x[] = {0, 2};
    CHECK(F9.inv(F9.from_coeffs(x)) == F9.from_coeffs(two_x));
}

TEST_CASE("squares") {
    const auto F7 = Field::build(7, 1);
    CHECK(F7.is_square(F7.zero()));
    CHECK(*F7.sqrt(F7.zero()) == F7.zero());
    CHECK(!F7.is_square(F7.from_int(3)));
    const auto r = F7.sqrt(F7.from_int(2));
    REQUIRE(r);
    CHECK(F7.mul(*r, *r) == F7.from_int(2));
    CHECK(F7.non_square() == F7.from_int(3));
}

TEST_CASE("field axioms against schoolbook arithmetic") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 1}, {5, 1}, {7, 1}, {11, 1}, {3, 2}, {5, 2}, {7, 2}, {11, 2}, {3, 3}, {3, 4}}) {
        const auto F = Field::build(p, n);
        const std::uint32_t q = F.size();
        CAPTURE(q);
        std::uint32_t squares = 0;
        for (std::uint32_t a = 0; a < q; ++a) {
            const Fe A{a};
            if (a != 0) {
                CHECK(F.mul(A, F.inv(A)) == F.one());
                if (F.is_square(A)) ++squares;
            }
            if (auto r = F.sqrt(A)) CHECK(F.mul(*r, *r) == A);
            for (std::uint32_t b = 0; b < q; ++b) {
                const Fe B{b};
                REQUIRE(F.coeffs(F.mul(A, B)) == naive_mul(F.coeffs(A), F.coeffs(B), F.modulus(), p));
                if (q > 25) continue;
                for (std::uint32_t c = 0; c < q; ++c) {
                    const Fe C{c};
                    REQUIRE(F.mul(F.mul(A, B), C) == F.mul(A, F.mul(B, C)));
                    REQUIRE(F.mul(A, F.add(B, C)) == F.add(F.mul(A, B), F.mul(A, C)));
                    REQUIRE(F.add(F.add(A, B), C) == F.add(A, F.add(B, C)));
                }
            }
        }
        CHECK(squares == (q - 1) / 2);
    }
}

TEST_CASE("frobenius is an automorphism fixing the prime field") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
        const auto F = Field::build(p, n);
        std::uint32_t fixed = 0;
        std::set<std::uint32_t> image;
        for (std::uint32_t a = 0; a < F.size(); ++a) {
            const Fe A{a};
            image.insert(F.frobenius(A).code);
            if (F.frobenius(A) == A) {
                ++fixed;
                CHECK(F.subfield_degree(A) == 1);
            }
            for (std::uint32_t b = 0; b < F.size(); ++b) {
                REQUIRE(F.frobenius(F.add(A, Fe{b})) == F.add(F.frobenius(A), F.frobenius(Fe{b})));
                REQUIRE(F.frobenius(F.mul(A, Fe{b})) == F.mul(F.frobenius(A), F.frobenius(Fe{b})));
            }
            if (n == 2) CHECK(F.frobenius(F.frobenius(A)) == A);
        }
        CHECK(fixed == p);
        CHECK(image.size() == F.size());
    }
}

TEST_CASE("coefficient round trip and printing") {
    const auto F = Field::build(5, 2);
    for (std::uint32_t a = 0; a < F.size(); ++a) CHECK(F.from_coeffs(F.coeffs(Fe{a})) == Fe{a});
    CHECK(F.to_string(F.zero()) == "0");
    CHECK(F.to_string(F.root()) == "x");
    CHECK(F.from_int(-1) == F.neg(F.one()));
}
