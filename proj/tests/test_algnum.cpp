#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "oracles.hpp"
#include "sak/algnum.hpp"

using namespace sak;

namespace {

// independent numeric Mahler oracle: Durand-Kerner in double precision
double durand_kerner_mahler(const IntPoly& f) {
    int d = f.degree();
    std::vector<std::complex<double>> cs(d + 1), z(d);
    for (int i = 0; i <= d; ++i) cs[i] = f.c[i].get_d();
    for (int i = 0; i < d; ++i) z[i] = std::polar(0.7 + 0.1 * i, 2.1 * i + 0.5);
    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = 0;
        for (int i = d; i >= 0; --i) acc = acc * x + cs[i];
        return acc;
    };
    for (int iter = 0; iter < 500; ++iter) {
        for (int i = 0; i < d; ++i) {
            std::complex<double> denom = cs[d];
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= z[i] - z[j];
            z[i] -= eval(z[i]) / denom;
        }
    }
    double out = std::log(std::abs(cs[d]));
    for (int i = 0; i < d; ++i) out += std::log(std::max(1.0, std::abs(z[i])));
    return out;
}

}  // namespace

TEST_CASE("certified roots: quadratics and clustering bounds") {
    auto disks = isolated_roots(IntPoly::from({-2, 0, 1}));  // x^2 - 2
    REQUIRE(disks.size() == 2);
    CHECK(std::abs(disks[0].center.real() + std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(disks[1].center.real() - std::sqrt(2.0)) < 1e-9);
    CHECK(disks[0].radius < 1e-12);

    // demands a cluster-correct union: (x^2+1)(x^2+x+1)
    auto f = poly_mul(IntPoly::from({1, 0, 1}), IntPoly::from({1, 1, 1}));
    auto all = isolated_roots(f);
    CHECK(all.size() == 4);
}

TEST_CASE("mahler_log matches the numeric oracle") {
    // golden ratio: x^2 - x - 1, M = (1+sqrt 5)/2
    auto fib = IntPoly::from({-1, -1, 1});
    auto m = mahler_log(fib);
    CHECK(std::abs(m.value - std::log((1 + std::sqrt(5.0)) / 2)) < 1e-11);
    CHECK(m.error < 1e-12);

    auto rng = oracles::rng(2025);
    std::uniform_int_distribution<int> deg(1, 6), coeff(-8, 8);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Int> v(deg(rng) + 1);
        for (auto& x : v) x = coeff(rng);
        IntPoly f(std::move(v));
        if (f.degree() < 1) continue;
        auto got = mahler_log(f);
        CHECK(std::abs(got.value - durand_kerner_mahler(f)) < 1e-6);
    }
}

TEST_CASE("algebraic numbers: construction and normalization") {
    auto half = AlgebraicNumber::from_rational(Rat(1, 2));
    CHECK(half.is_rational());
    CHECK(half.rational_value() == Rat(1, 2));

    // reducible defining polynomial picks the right irreducible factor
    auto f = poly_mul(IntPoly::from({-2, 0, 1}), IntPoly::from({-3, 1}));  // (x^2-2)(x-3)
    IsolatingBox near_sqrt2{Rat(1), Rat(2), Rat(-1), Rat(1)};
    auto a = AlgebraicNumber::from_poly_root(f, near_sqrt2);
    CHECK(a.minimal_polynomial() == IntPoly::from({-2, 0, 1}));
    CHECK(std::abs(a.approx().z.real() - std::sqrt(2.0)) < 1e-9);

    IsolatingBox near_three{Rat(5, 2), Rat(7, 2), Rat(-1), Rat(1)};
    auto b = AlgebraicNumber::from_poly_root(f, near_three);
    CHECK(b.is_rational());
    CHECK(b.rational_value() == 3);

    IsolatingBox too_wide{Rat(-2), Rat(2), Rat(-1), Rat(1)};
    CHECK_THROWS_AS(AlgebraicNumber::from_poly_root(f, too_wide), Error);
    IsolatingBox empty_box{Rat(10), Rat(11), Rat(-1), Rat(1)};
    CHECK_THROWS_AS(AlgebraicNumber::from_poly_root(f, empty_box), Error);
}

TEST_CASE("arithmetic: products, powers, inverses") {
    auto sqrt2 = AlgebraicNumber::from_poly_root(IntPoly::from({-2, 0, 1}),
                                                 {Rat(1), Rat(2), Rat(0), Rat(0)});
    auto sqrt3 = AlgebraicNumber::from_poly_root(IntPoly::from({-3, 0, 1}),
                                                 {Rat(1), Rat(2), Rat(0), Rat(0)});

    SECTION("sqrt2 * sqrt2 = 2 exactly") {
        auto four = alg_mul(sqrt2, sqrt2);
        CHECK(four.is_rational());
        CHECK(four.rational_value() == 2);
    }
    SECTION("sqrt2 * sqrt3 = sqrt6") {
        auto s6 = alg_mul(sqrt2, sqrt3);
        CHECK(s6.minimal_polynomial() == IntPoly::from({-6, 0, 1}));
        CHECK(std::abs(s6.approx().z.real() - std::sqrt(6.0)) < 1e-8);
    }
    SECTION("powers stay inside Q(a)") {
        auto p3 = alg_pow(sqrt2, 3);  // 2 sqrt2
        CHECK(p3.minimal_polynomial() == IntPoly::from({-8, 0, 1}));
        auto p4 = alg_pow(sqrt2, 4);
        CHECK(p4.is_rational());
        CHECK(p4.rational_value() == 4);
        auto pm2 = alg_pow(sqrt2, -2);
        CHECK(pm2.rational_value() == Rat(1, 2));
    }
    SECTION("rational scaling fast path") {
        auto scaled = alg_mul(AlgebraicNumber::from_rational(Rat(3, 2)), sqrt2);
        CHECK(scaled.minimal_polynomial() == IntPoly::from({-9, 0, 2}));  // 2x^2 = 9
    }
    SECTION("inverse") {
        auto inv = alg_inverse(sqrt2);
        auto prod = alg_mul(inv, sqrt2);
        CHECK(prod.is_one());
    }
    SECTION("division") {
        auto r = alg_div(sqrt3, sqrt3);
        CHECK(r.is_one());
    }
    SECTION("degree cap") {
        // two degree-9 numbers would give degree 81 > 64
        std::vector<Int> v(10, Int(0));
        v[0] = -2;
        v[9] = 1;
        IntPoly deg9(std::move(v));
        auto a = AlgebraicNumber::from_poly_root(deg9, {Rat(1), Rat(2), Rat(0), Rat(0)});
        auto b = AlgebraicNumber::from_poly_root(IntPoly::from({-3, 0, 0, 0, 0, 0, 0, 0, 0, 1}),
                                                 {Rat(1), Rat(2), Rat(0), Rat(0)});
        CHECK_THROWS_AS(alg_mul(a, b), Error);
    }
}

TEST_CASE("roots of unity are recognized exactly") {
    CHECK(is_root_of_unity(AlgebraicNumber::from_rational(Rat(-1))));
    CHECK_FALSE(is_root_of_unity(AlgebraicNumber::from_rational(Rat(2))));
    // primitive 6th root: x^2 - x + 1
    auto zeta6 = AlgebraicNumber::from_poly_root(IntPoly::from({1, -1, 1}),
                                                 {Rat(0), Rat(1), Rat(0), Rat(1)});
    CHECK(is_root_of_unity(zeta6));
    auto golden = AlgebraicNumber::from_poly_root(IntPoly::from({-1, -1, 1}),
                                                  {Rat(1), Rat(2), Rat(0), Rat(0)});
    CHECK_FALSE(is_root_of_unity(golden));
    // zeta6 * zeta6bar = 1: product of conjugate selections
    auto zeta6bar = AlgebraicNumber::from_poly_root(IntPoly::from({1, -1, 1}),
                                                    {Rat(0), Rat(1), Rat(-1), Rat(0)});
    CHECK(alg_mul(zeta6, zeta6bar).is_one());
}

TEST_CASE("weil_height: spot values and laws") {
    SECTION("h(2) = log 2, h(p/q) = log max(|p|, |q|)") {
        auto h2 = weil_height(AlgebraicNumber::from_rational(Rat(2)));
        CHECK(std::abs(h2.value - std::log(2.0)) < 1e-12);
        auto h23 = weil_height(AlgebraicNumber::from_rational(Rat(2, 3)));
        CHECK(std::abs(h23.value - std::log(3.0)) < 1e-12);
    }
    SECTION("roots of unity have height zero") {
        auto zeta6 = AlgebraicNumber::from_poly_root(IntPoly::from({1, -1, 1}),
                                                     {Rat(0), Rat(1), Rat(0), Rat(1)});
        auto h = weil_height(zeta6);
        CHECK(h.value == 0.0);
    }
    SECTION("golden ratio height = (1/2) log phi") {
        auto golden = AlgebraicNumber::from_poly_root(IntPoly::from({-1, -1, 1}),
                                                      {Rat(1), Rat(2), Rat(0), Rat(0)});
        auto h = weil_height(golden);
        CHECK(std::abs(h.value - 0.5 * std::log((1 + std::sqrt(5.0)) / 2)) < 1e-11);
        CHECK(std::abs(h.value - 0.2406059125) < 1e-6);
    }
    SECTION("h(a) = h(1/a) and h(a^n) = |n| h(a)") {
        auto rng = oracles::rng(77);
        for (int trial = 0; trial < 10; ++trial) {
            Rat v = oracles::random_rat(rng, -9, 9, 7);
            if (v == 0) continue;
            auto a = AlgebraicNumber::from_rational(v);
            CHECK(std::abs(weil_height(a).value - weil_height(alg_inverse(a)).value) < 1e-12);
            for (long n : {-3L, -2L, 2L, 3L}) {
                CHECK(std::abs(weil_height(alg_pow(a, n)).value -
                               std::abs(n) * weil_height(a).value) < 1e-11);
            }
        }
        auto sqrt2 = AlgebraicNumber::from_poly_root(IntPoly::from({-2, 0, 1}),
                                                     {Rat(1), Rat(2), Rat(0), Rat(0)});
        CHECK(std::abs(weil_height(alg_pow(sqrt2, 3)).value - 3 * weil_height(sqrt2).value) <
              1e-11);
        CHECK(std::abs(weil_height(alg_inverse(sqrt2)).value - weil_height(sqrt2).value) < 1e-11);
    }
}
