#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sak/intpoly.hpp"

using namespace sak;

namespace {

// Sylvester-matrix resultant by fraction-free Bareiss elimination (oracle).
Int sylvester_resultant(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return Int(0);
    const int n = a.degree(), m = b.degree();
    if (n == 0) return int_pow(a.c[0], m);
    if (m == 0) return int_pow(b.c[0], n);
    const int size = n + m;
    std::vector<std::vector<Int>> s(size, std::vector<Int>(size, Int(0)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[i][i + j] = a.c[n - j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[m + i][i + j] = b.c[m - j];
    // Bareiss determinant
    Int prev(1);
    int sign = 1;
    for (int k = 0; k < size - 1; ++k) {
        if (s[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < size; ++i)
                if (s[i][k] != 0) { p = i; break; }
            if (p < 0) return Int(0);
            std::swap(s[k], s[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j) {
                Int t = s[k][k] * s[i][j] - s[i][k] * s[k][j];
                mpz_divexact(s[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            s[i][k] = 0;
        }
        prev = s[k][k];
    }
    return Int(sign) * s[size - 1][size - 1];
}

IntPoly random_poly(std::mt19937_64& g, int max_deg, int max_coeff) {
    std::uniform_int_distribution<int> d(0, max_deg), c(-max_coeff, max_coeff);
    int deg = d(g);
    std::vector<Int> v(deg + 1);
    for (auto& x : v) x = c(g);
    if (v.back() == 0) v.back() = 1;
    return IntPoly(std::move(v));
}

}  // namespace

TEST_CASE("basic arithmetic and evaluation") {
    auto p = IntPoly::from({1, 0, -2, 1});  // x^3 - 2x^2 + 1... coefficients low-to-high
    CHECK(p.degree() == 3);
    CHECK(poly_eval(p, Int(2)) == 1 - 8 + 8);
    CHECK(poly_eval(p, Rat(1, 2)) == Rat(1) - Rat(2) / 4 + Rat(1, 8));
    CHECK(poly_mul(IntPoly::from({1, 1}), IntPoly::from({-1, 1})) == IntPoly::from({-1, 0, 1}));
    CHECK(derivative(IntPoly::from({5, 3, 0, 2})) == IntPoly::from({3, 0, 6}));
    CHECK(content(IntPoly::from({6, -9, 12})) == 3);
}

TEST_CASE("exact division") {
    auto a = poly_mul(IntPoly::from({-1, 1}), IntPoly::from({2, 3}));
    auto q = try_div_exact(a, IntPoly::from({-1, 1}));
    REQUIRE(q.has_value());
    CHECK(*q == IntPoly::from({2, 3}));
    CHECK_FALSE(try_div_exact(IntPoly::from({1, 0, 1}), IntPoly::from({1, 1})).has_value());
}

TEST_CASE("gcd: random products share the planted factor") {
    auto rng = oracles::rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        IntPoly common = random_poly(rng, 3, 4);
        if (common.degree() < 1) continue;
        IntPoly a = poly_mul(common, random_poly(rng, 3, 4));
        IntPoly b = poly_mul(common, random_poly(rng, 3, 4));
        IntPoly g = poly_gcd(a, b);
        // common divides the gcd
        CHECK(try_div_exact(poly_scale(g, content(common) * common.lc()),
                            with_positive_lc(primitive_part(common)))
                  .has_value());
        // gcd divides both inputs up to content
        CHECK(try_div_exact(poly_mul(a, IntPoly::constant(g.lc())), g).has_value());
    }
}

TEST_CASE("resultant agrees with the Sylvester determinant oracle") {
    CHECK(resultant(IntPoly::from({-1, 1}), IntPoly::from({-2, 1})) == -1);  // prod (alpha - beta)
    CHECK(resultant(IntPoly::from({-1, 1}), IntPoly::from({-1, 1})) == 0);
    auto rng = oracles::rng(113);
    for (int trial = 0; trial < 150; ++trial) {
        IntPoly a = random_poly(rng, 5, 5);
        IntPoly b = random_poly(rng, 5, 5);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(resultant(a, b) == sylvester_resultant(a, b));
    }
}

TEST_CASE("squarefree part strips multiplicities") {
    auto sq = poly_mul(poly_mul(IntPoly::from({-1, 1}), IntPoly::from({-1, 1})),
                       IntPoly::from({1, 1}));
    CHECK(squarefree_part(sq) == poly_mul(IntPoly::from({-1, 1}), IntPoly::from({1, 1})));
}

TEST_CASE("factor: spot cases") {
    SECTION("x^2 - 1") {
        auto f = factor(IntPoly::from({-1, 0, 1}));
        REQUIRE(f.factors.size() == 2);
        CHECK(f.unit == 1);
        CHECK(f.content == 1);
    }
    SECTION("T^2 - T + 1 is irreducible (primitive 6th roots)") {
        auto f = factor(IntPoly::from({1, -1, 1}));
        REQUIRE(f.factors.size() == 1);
        CHECK(f.factors[0].second == 1);
        CHECK(is_cyclotomic(f.factors[0].first));
    }
    SECTION("multiplicities") {
        auto p = poly_mul(poly_pow(IntPoly::from({-1, 1}), 3), IntPoly::from({1, 0, 1}));
        auto f = factor(poly_scale(p, Int(-6)));
        CHECK(f.unit == -1);
        CHECK(f.content == 6);
        bool saw_linear = false, saw_quad = false;
        for (auto& [h, e] : f.factors) {
            if (h == IntPoly::from({-1, 1})) { CHECK(e == 3); saw_linear = true; }
            if (h == IntPoly::from({1, 0, 1})) { CHECK(e == 1); saw_quad = true; }
        }
        CHECK(saw_linear);
        CHECK(saw_quad);
    }
    SECTION("non-monic: 6x^2 + 5x + 1 = (2x+1)(3x+1)") {
        auto f = factor(IntPoly::from({1, 5, 6}));
        REQUIRE(f.factors.size() == 2);
        std::vector<IntPoly> hs{f.factors[0].first, f.factors[1].first};
        std::sort(hs.begin(), hs.end());
        CHECK(hs[0] == IntPoly::from({1, 2}));
        CHECK(hs[1] == IntPoly::from({1, 3}));
    }
}

TEST_CASE("factor: random products reconstruct, factors irreducible mod checks") {
    auto rng = oracles::rng(131);
    for (int trial = 0; trial < 40; ++trial) {
        IntPoly p = IntPoly::constant(Int(1));
        int pieces = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < pieces; ++i) p = poly_mul(p, random_poly(rng, 4, 3));
        if (p.degree() < 1) continue;
        auto f = factor(p);
        IntPoly rebuilt = IntPoly::constant(f.content * f.unit);
        for (auto& [h, e] : f.factors) rebuilt = poly_mul(rebuilt, poly_pow(h, e));
        CHECK(rebuilt == p);
        for (auto& [h, e] : f.factors) {
            CHECK(h.lc() > 0);
            CHECK(content(h) == 1);
        }
    }
}

TEST_CASE("factor handles cyclotomic-heavy products") {
    // x^12 - 1 = prod of cyclotomics of conductors dividing 12
    std::vector<Int> v(13, Int(0));
    v[0] = -1;
    v[12] = 1;
    auto f = factor(IntPoly(std::move(v)));
    int total_deg = 0;
    for (auto& [h, e] : f.factors) {
        CHECK(e == 1);
        CHECK(is_cyclotomic(h));
        total_deg += h.degree();
    }
    CHECK(total_deg == 12);
    CHECK(f.factors.size() == 6);  // conductors 1,2,3,4,6,12
}

TEST_CASE("is_cyclotomic rejects non-cyclotomics") {
    CHECK(is_cyclotomic(IntPoly::from({-1, 1})));      // x - 1
    CHECK(is_cyclotomic(IntPoly::from({1, 1})));       // x + 1
    CHECK(is_cyclotomic(IntPoly::from({1, 1, 1})));    // x^2 + x + 1
    CHECK(is_cyclotomic(IntPoly::from({1, 0, 1})));    // x^2 + 1
    CHECK_FALSE(is_cyclotomic(IntPoly::from({-2, 1})));     // x - 2
    CHECK_FALSE(is_cyclotomic(IntPoly::from({-1, -1, 1}))); // x^2 - x - 1 (golden ratio)
    CHECK_FALSE(is_cyclotomic(IntPoly::from({1, 3, 1})));
    CHECK_FALSE(is_cyclotomic(IntPoly::from({2, 0, 2})));   // non-primitive
}

TEST_CASE("modular helpers: powmod and gcd") {
    Int p(7);
    auto f = modp::from_int_poly(IntPoly::from({1, 0, 1}), p);  // x^2 + 1 mod 7
    auto x = modp::P{Int(0), Int(1)};
    auto x4 = modp::powmod(x, Int(4), f, p);  // x^4 = (x^2)^2 = (-1)^2 = 1
    CHECK(x4 == modp::P{Int(1)});
    auto g = modp::gcd(modp::from_int_poly(IntPoly::from({-1, 0, 0, 0, 1}), p), f, p);
    CHECK(modp::deg(g) == 2);  // x^2+1 divides x^4-1
}
