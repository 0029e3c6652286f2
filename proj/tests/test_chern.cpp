#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sak/chern.hpp"
#include "sak/chow.hpp"

using namespace sak;

namespace {

TorusPointC random_torus_point(std::mt19937_64& g, int t) {
    std::uniform_real_distribution<double> mag(0.2, 5.0), arg(0, 2 * M_PI);
    TorusPointC p;
    for (int u = 0; u < t; ++u) p.z.push_back(std::polar(mag(g), arg(g)));
    return p;
}

FlatAbelianData simple_abelian(double hval, CD lift_scalar, CD tau = CD(0, 1)) {
    FlatAbelianData d;
    d.g = 1;
    d.hermitian = {{CD(hval, 0)}};
    d.lift = {{lift_scalar}};
    d.tau = tau;
    return d;
}

}  // namespace

TEST_CASE("toric_form_matrix: hand value at z = 1, phi = 1") {
    auto g = toric_form_matrix({{1.0}}, {{CD(1, 0)}});
    // omega = dd^c log(1+e^{2 lambda}) + dd^c log(1+e^{-2 lambda}) at lambda=0;
    // with the degree-true metric normalization this is (1/(2 pi)) I_2
    CHECK(std::abs(g.at(0, 0) - 1 / (2 * M_PI)) < 1e-14);
    CHECK(std::abs(g.at(1, 1) - 1 / (2 * M_PI)) < 1e-14);
    CHECK(std::abs(g.at(0, 1)) < 1e-15);
}

TEST_CASE("toric_form_matrix: zero map, symmetry, I-compatibility, semipositivity") {
    auto zero = toric_form_matrix({{0.0, 0.0}}, {{CD(2, 1), CD(0.5, -0.3)}});
    for (double x : zero.m) CHECK(x == 0.0);

    auto rng = oracles::rng(2222);
    std::uniform_real_distribution<double> entry(-3, 3);
    std::mt19937_64 g64(99);
    for (int trial = 0; trial < 100; ++trial) {
        int t = 1 + (trial % 2);
        int tp = 1 + (trial % 2);
        RealMat a(tp, std::vector<double>(t));
        for (auto& row : a)
            for (auto& x : row) x = entry(g64);
        auto pt = random_torus_point(g64, t);
        auto g = toric_form_matrix(a, pt);
        CHECK(g.max_asymmetry() < 1e-14);
        CHECK(g.i_compat_defect() < 1e-12);
        auto ev = symmetric_eigenvalues(g);
        CHECK(ev.front() >= -1e-12);
    }
}

TEST_CASE("abelian_form_matrix: identity, zero, quadratic scaling") {
    auto id = abelian_form_matrix(simple_abelian(1.0, CD(1, 0)));
    CHECK(std::abs(id.at(0, 0) - 1) < 1e-15);
    CHECK(std::abs(id.at(1, 1) - 1) < 1e-15);
    CHECK(std::abs(id.at(0, 1)) < 1e-15);

    auto zero = abelian_form_matrix(simple_abelian(1.0, CD(0, 0)));
    for (double x : zero.m) CHECK(x == 0.0);

    auto one = abelian_form_matrix(simple_abelian(2.0, CD(0.7, 0.4)));
    auto twice = abelian_form_matrix(simple_abelian(2.0, CD(1.4, 0.8)));
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) CHECK(std::abs(twice.at(p, q) - 4 * one.at(p, q)) < 1e-12);

    FlatAbelianData bad = simple_abelian(1.0, CD(1, 0));
    bad.hermitian = {{CD(1, 0.5)}};
    CHECK_THROWS_AS(abelian_form_matrix(bad), Error);
}

TEST_CASE("kernel_rank: rank laws of the paper's cases") {
    std::mt19937_64 g64(4242);
    std::uniform_real_distribution<double> entry(-2, 2);

    SECTION("t=2, t'=1, torus only: complex kernel dim 1") {
        for (int trial = 0; trial < 20; ++trial) {
            RealMat a{{entry(g64), entry(g64)}};
            if (std::abs(a[0][0]) + std::abs(a[0][1]) < 0.1) continue;
            auto g = toric_form_matrix(a, random_torus_point(g64, 2));
            CHECK(kernel_rank(g) == 1);
        }
    }
    SECTION("t=1, t'=1, phi=1: full rank") {
        auto g = toric_form_matrix({{1.0}}, {{CD(0.4, 1.7)}});
        CHECK(kernel_rank(g) == 0);
    }
    SECTION("mixed surjective pair: rank 0; translation invariance of the dimension") {
        RealMat a{{1.3}};
        auto ab = abelian_form_matrix(simple_abelian(1.0, CD(1, 0)));
        std::uniform_real_distribution<double> mag(0.3, 4.0), arg(0, 2 * M_PI);
        int base_rank = -1;
        for (int trial = 0; trial < 20; ++trial) {
            TorusPointC pt{{std::polar(mag(g64), arg(g64))}};
            auto combined = combined_form_matrix(0.8, toric_form_matrix(a, pt), ab);
            int k = kernel_rank(combined);
            if (base_rank < 0) base_rank = k;
            CHECK(k == 0);
            CHECK(k == base_rank);
        }
    }
    SECTION("kernel of a sum is the intersection of kernels") {
        // omega(phi1) + omega(phi2) with phi1 = (1,0), phi2 = (0,1) on t=2:
        // each kernel has complex dim 1, the sum is nondegenerate
        std::uniform_real_distribution<double> mag(0.3, 4.0), arg(0, 2 * M_PI);
        for (int trial = 0; trial < 10; ++trial) {
            TorusPointC pt{{std::polar(mag(g64), arg(g64)), std::polar(mag(g64), arg(g64))}};
            auto g1 = toric_form_matrix({{1.0, 0.0}}, pt);
            auto g2 = toric_form_matrix({{0.0, 1.0}}, pt);
            CHECK(kernel_rank(g1) == 1);
            CHECK(kernel_rank(g2) == 1);
            FormMatrix sum(2);
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) sum.at(p, q) = g1.at(p, q) + g2.at(p, q);
            CHECK(kernel_rank(sum) == 0);
        }
    }
}

TEST_CASE("quadrature: Chern/Chow bridge for t = 1") {
    for (long a = 1; a <= 3; ++a) {
        auto res = integrate_top_power({{static_cast<double>(a)}}, 1, nullptr, 1.0, 1, 0);
        REQUIRE(res.converged);
        // oracle: deg(c1(pr2* M_1) . [graph closure]) = 2|a|
        Int deg = toric_intersection_degree({{a}}, 1, 1, 0);
        CHECK(std::abs(res.value - deg.get_d()) < 1e-2);
        CHECK(res.error_estimate < 1e-2);
    }
}

TEST_CASE("quadrature: homogeneity n^{s1}") {
    for (long n : {2L, 3L}) {
        auto base = integrate_top_power({{1.5}}, 1, nullptr, 1.0, 1, 0);
        auto scaled = integrate_top_power({{1.5 * n}}, 1, nullptr, 1.0, 1, 0);
        REQUIRE(base.converged);
        REQUIRE(scaled.converged);
        CHECK(std::abs(scaled.value / base.value - n) < 1e-3 * n);
    }
}

TEST_CASE("quadrature: abelian factor and mixed powers") {
    auto ab = simple_abelian(1.0, CD(1, 0));
    // t=1, g=1, s1=1, s2=1: toric degree times the abelian area Im H = 1
    auto res = integrate_top_power({{2.0}}, 1, &ab, 1.0, 1, 1);
    REQUIRE(res.converged);
    CHECK(std::abs(res.value - 4.0) < 2e-2);  // 2|a| * 1

    // other splits vanish on the product model
    auto res20 = integrate_top_power({{2.0}}, 1, &ab, 1.0, 2, 0);
    CHECK(res20.value == 0.0);
    auto res02 = integrate_top_power({{2.0}}, 1, &ab, 1.0, 0, 2);
    CHECK(res02.value == 0.0);

    // c-weight scales the toric factor linearly in the t=1 model
    auto weighted = integrate_top_power({{2.0}}, 1, &ab, 3.0, 1, 1);
    CHECK(std::abs(weighted.value - 12.0) < 6e-2);
}

TEST_CASE("quadrature rejects bad shapes") {
    CHECK_THROWS_AS(integrate_top_power({{1.0}}, 1, nullptr, 1.0, 2, 0), Error);
    CHECK_THROWS_AS(integrate_top_power({{1.0, 0.0}, {0.0, 1.0}}, 2, nullptr, 1.0, 1, 0), Error);
    auto ab = simple_abelian(1.0, CD(1, 0), CD(0, -1));
    CHECK_THROWS_AS(integrate_top_power({{1.0}}, 1, &ab, 1.0, 1, 1), Error);
}

TEST_CASE("t = 2 diagonal map integrates to the Chow degree") {
    // phi: (x1,x2) -> (x1, x2) via the 2x2 identity: deg = 2^2 * 0! * 2! *
    // sum over permutations |a_..| = 8; ring oracle gives the same
    RealMat id{{1.0, 0.0}, {0.0, 1.0}};
    QuadratureParams p;
    p.base_n = 16;
    auto res = integrate_top_power(id, 2, nullptr, 1.0, 2, 0, p);
    REQUIRE(res.converged);
    Int deg = toric_intersection_degree({{1, 0}, {0, 1}}, 2, 2, 0);
    CHECK(std::abs(res.value - deg.get_d()) < 5e-2);
}
