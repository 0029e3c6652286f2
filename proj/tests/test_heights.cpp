#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "sak/heights.hpp"

using namespace sak;

namespace {

TorusPointQbar rational_point(std::vector<Rat> vs) {
    TorusPointQbar x;
    for (auto& v : vs) x.coords.push_back(AlgebraicNumber::from_rational(v));
    return x;
}

RatMatrix from_rows(const std::vector<std::vector<Rat>>& rows) {
    RatMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

TorusPointQbar power_point(const TorusPointQbar& x, long n) {
    TorusPointQbar out;
    for (const auto& c : x.coords) out.coords.push_back(alg_pow(c, n));
    return out;
}

TorusPointQbar product_point(const TorusPointQbar& x, const TorusPointQbar& y) {
    TorusPointQbar out;
    for (size_t i = 0; i < x.coords.size(); ++i)
        out.coords.push_back(alg_mul(x.coords[i], y.coords[i]));
    return out;
}

}  // namespace

TEST_CASE("toric_canonical_height: spot values") {
    CHECK(toric_canonical_height(rational_point({Rat(1), Rat(1)})).value == 0.0);

    auto h = toric_canonical_height(rational_point({Rat(2), Rat(3)}));
    CHECK(std::abs(h.value - std::log(36.0)) < 1e-12);  // 2(log2 + log3)

    // limit oracle: lim h(x^(2^k)) / 2^k recovers the canonical height
    auto x = rational_point({Rat(2), Rat(3)});
    auto xk = power_point(x, 16);
    CHECK(std::abs(toric_canonical_height(xk).value / 16 - h.value) < 1e-10);

    // torsion translate has the same height
    auto zeta6 = AlgebraicNumber::from_poly_root(IntPoly::from({1, -1, 1}),
                                                 {Rat(0), Rat(1), Rat(0), Rat(1)});
    TorusPointQbar tw;
    tw.coords = {alg_mul(x.coords[0], zeta6), x.coords[1]};
    CHECK(std::abs(toric_canonical_height(tw).value - h.value) < 1e-9);
}

TEST_CASE("toric height laws: non-negativity and |n|-homogeneity") {
    auto rng = oracles::rng(505);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> vs(2);
        for (auto& v : vs) {
            do { v = oracles::random_rat(rng, -6, 6, 5); } while (v == 0);
        }
        auto x = rational_point(vs);
        auto h = toric_canonical_height(x);
        CHECK(h.value >= 0.0);
        for (long n : {-3L, -2L, -1L, 0L, 1L, 2L, 3L}) {
            if (n == 0) continue;
            auto hn = toric_canonical_height(power_point(x, n));
            CHECK(std::abs(hn.value - std::abs(static_cast<double>(n)) * h.value) < 1e-9);
        }
    }
}

TEST_CASE("graph_canonical_height: identity, monomial, denominators") {
    auto x23 = rational_point({Rat(2), Rat(3)});
    auto id = graph_canonical_height(RatMatrix::identity(2), x23);
    auto tor = toric_canonical_height(x23);
    CHECK(std::abs(id.value - tor.value) < 1e-12);

    // phi = (2,3) on x = (2,3): 2 h(2^2 3^3) = 2 log 108
    auto h = graph_canonical_height(from_rows({{Rat(2), Rat(3)}}), x23);
    CHECK(std::abs(h.value - 2 * std::log(108.0)) < 1e-12);

    // half-exponent, denominator independence
    auto x4 = rational_point({Rat(4)});
    auto ha = graph_canonical_height(from_rows({{Rat(1, 2)}}), x4);
    CHECK(std::abs(ha.value - 2 * std::log(2.0)) < 1e-12);
    // forcing a non-minimal denominator through scaling by 2/2 keeps the value
    RatMatrix twice = from_rows({{Rat(2, 4)}});
    CHECK(std::abs(graph_canonical_height(twice, x4).value - ha.value) < 1e-12);
}

TEST_CASE("graph height subadditivity (group law)") {
    auto rng = oracles::rng(707);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rat> xs(2), ys(2);
        for (auto& v : xs) do { v = oracles::random_rat(rng, -5, 5, 4); } while (v == 0);
        for (auto& v : ys) do { v = oracles::random_rat(rng, -5, 5, 4); } while (v == 0);
        auto x = rational_point(xs), y = rational_point(ys);
        RatMatrix phi(1, 2);
        phi(0, 0) = Rat(std::uniform_int_distribution<int>(-3, 3)(rng));
        phi(0, 1) = Rat(std::uniform_int_distribution<int>(-3, 3)(rng));
        auto hxy = graph_canonical_height(phi, product_point(x, y));
        auto hx = graph_canonical_height(phi, x);
        auto hy = graph_canonical_height(phi, y);
        CHECK(hxy.value <= hx.value + hy.value + 1e-9);
    }
}

TEST_CASE("abelian_model_height: quadratic form laws, exact") {
    AbelianPoint p;
    p.gram = RatMatrix::identity(2);
    p.v = {Rat(1), Rat(2)};
    CHECK(abelian_model_height(p) == 5);
    p.v = {Rat(0), Rat(0)};
    CHECK(abelian_model_height(p) == 0);

    auto rng = oracles::rng(909);
    for (int trial = 0; trial < 50; ++trial) {
        // random PSD Gram: W^T W
        RatMatrix w(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) w(i, j) = oracles::random_rat(rng, -3, 3, 2);
        SymMat q = w.transposed() * w;
        AbelianPoint a{{oracles::random_rat(rng), oracles::random_rat(rng)}, q};
        AbelianPoint b{{oracles::random_rat(rng), oracles::random_rat(rng)}, q};
        // n^2 law
        AbelianPoint a2{{2 * a.v[0], 2 * a.v[1]}, q};
        CHECK(abelian_model_height(a2) == 4 * abelian_model_height(a));
        // parallelogram, exact
        AbelianPoint sum{{a.v[0] + b.v[0], a.v[1] + b.v[1]}, q};
        AbelianPoint dif{{a.v[0] - b.v[0], a.v[1] - b.v[1]}, q};
        CHECK(abelian_model_height(sum) + abelian_model_height(dif) ==
              2 * abelian_model_height(a) + 2 * abelian_model_height(b));
        // subadditivity with factor 2
        CHECK(abelian_model_height(sum) <= 2 * abelian_model_height(a) + 2 * abelian_model_height(b));
        CHECK(abelian_model_height(a) >= 0);
    }

    SECTION("non-symmetric Gram rejected") {
        AbelianPoint bad;
        bad.gram = RatMatrix(2, 2);
        bad.gram(0, 1) = 1;
        bad.v = {Rat(1), Rat(1)};
        CHECK_THROWS_AS(abelian_model_height(bad), Error);
    }
    SECTION("indefinite Gram rejected") {
        AbelianPoint bad;
        bad.gram = RatMatrix(1, 1);
        bad.gram(0, 0) = -1;
        bad.v = {Rat(1)};
        CHECK_THROWS_AS(abelian_model_height(bad), Error);
    }
}

TEST_CASE("close_homomorphism_gap: equality case and random sweeps") {
    SECTION("phi = phi'") {
        auto g = close_homomorphism_gap(from_rows({{Rat(2)}}), from_rows({{Rat(2)}}),
                                        rational_point({Rat(7)}));
        CHECK(g.gap.value == 0.0);
        CHECK(g.bound.value == 0.0);
    }
    SECTION("phi = (2), phi' = (3), x = (2): equality of gap and bound") {
        auto g = close_homomorphism_gap(from_rows({{Rat(2)}}), from_rows({{Rat(3)}}),
                                        rational_point({Rat(2)}));
        CHECK(g.l == 1);
        CHECK(std::abs(g.gap.value - 2 * std::log(2.0)) < 1e-12);
        CHECK(std::abs(g.bound.value - 2 * std::log(2.0)) < 1e-12);
        CHECK(g.gap.value <= g.bound.value + 1e-9);
    }
    SECTION("random integer matrices never violate the bound") {
        auto rng = oracles::rng(1111);
        std::uniform_int_distribution<int> e(-5, 5);
        for (int trial = 0; trial < 100; ++trial) {
            int tp = 1 + (trial % 2);
            RatMatrix a(tp, 2), b(tp, 2);
            for (int i = 0; i < tp; ++i)
                for (int j = 0; j < 2; ++j) {
                    a(i, j) = Rat(e(rng));
                    b(i, j) = Rat(e(rng));
                }
            std::vector<Rat> vs(2);
            for (auto& v : vs) do { v = oracles::random_rat(rng, -4, 4, 3); } while (v == 0);
            auto g = close_homomorphism_gap(a, b, rational_point(vs));
            CHECK(g.gap.value <= g.bound.value + 1e-9);
        }
    }
}

TEST_CASE("height_cone_member") {
    auto mk = [](std::vector<Rat> t) {
        ModelPoint p;
        p.toric = rational_point(std::move(t));
        return p;
    };

    SECTION("x in Sigma") {
        HeightConeQuery q;
        q.sigma = {mk({Rat(2), Rat(5)})};
        q.x = mk({Rat(2), Rat(5)});
        q.epsilon = Rat(1, 10);
        CHECK(height_cone_member(q));
    }
    SECTION("far point misses a torsion Sigma") {
        HeightConeQuery q;
        q.sigma = {mk({Rat(1), Rat(1)})};
        q.x = mk({Rat(2), Rat(1)});
        q.epsilon = Rat(1, 10);
        CHECK_FALSE(height_cone_member(q));  // 2 log 2 > 0.1
    }
    SECTION("torsion translates stay inside") {
        auto zeta6 = AlgebraicNumber::from_poly_root(IntPoly::from({1, -1, 1}),
                                                     {Rat(0), Rat(1), Rat(0), Rat(1)});
        HeightConeQuery q;
        q.sigma = {mk({Rat(2), Rat(1)})};
        ModelPoint x;
        x.toric.coords = {alg_mul(AlgebraicNumber::from_rational(Rat(2)), zeta6),
                          AlgebraicNumber::from_rational(Rat(1))};
        q.x = x;
        q.epsilon = Rat(1, 10);
        CHECK(height_cone_member(q));
    }
    SECTION("epsilon must be positive") {
        HeightConeQuery q;
        q.sigma = {mk({Rat(1)})};
        q.x = mk({Rat(1)});
        q.epsilon = Rat(0);
        CHECK_THROWS_AS(height_cone_member(q), Error);
    }
    SECTION("combined toric x abelian model") {
        SymMat g1 = RatMatrix::identity(1);
        auto with_ab = [&](std::vector<Rat> t, Rat av) {
            ModelPoint p;
            p.toric = rational_point(std::move(t));
            p.abelian = AbelianPoint{{av}, g1};
            return p;
        };
        HeightConeQuery q;
        q.sigma = {with_ab({Rat(3)}, Rat(1))};
        q.x = with_ab({Rat(3)}, Rat(1));
        q.epsilon = Rat(1, 100);
        CHECK(height_cone_member(q));
        q.x = with_ab({Rat(3)}, Rat(5));  // abelian height of difference = 16
        CHECK_FALSE(height_cone_member(q));
    }
}

TEST_CASE("cover_grid") {
    SECTION("1-dim toric box [0,1], delta = 1/2, n = 2") {
        CoverBox box;
        box.toric = {{Rat(0), Rat(1)}};
        auto grid = cover_grid(box, Rat(1, 2), 2);
        REQUIRE(grid.size() == 3);
        CHECK(grid[0].toric[0] == Rat(0));
        CHECK(grid[1].toric[0] == Rat(1, 2));
        CHECK(grid[2].toric[0] == Rat(1));
    }
    SECTION("empty box") {
        CoverBox box;
        box.toric = {{Rat(1), Rat(0)}};
        CHECK(cover_grid(box, Rat(1, 2), 2).empty());
    }
    SECTION("insufficient n_delta") {
        CoverBox box;
        box.toric = {{Rat(0), Rat(1)}};
        CHECK_THROWS_AS(cover_grid(box, Rat(1, 10), 2), Error);
        box.toric.clear();
        box.abelian = {{Rat(0), Rat(1)}};
        CHECK_THROWS_AS(cover_grid(box, Rat(1, 10), 3), Error);  // 1/9 > 1/10
        CHECK(cover_grid(box, Rat(1, 9), 3).size() == 4);
    }
    SECTION("mixed box covering property on random samples") {
        CoverBox box;
        box.toric = {{Rat(0), Rat(1)}};
        box.abelian = {{Rat(0), Rat(1)}};
        Rat delta(1, 4);
        auto grid = cover_grid(box, delta, 4);
        auto rng = oracles::rng(1313);
        std::uniform_int_distribution<int> num(0, 1000);
        for (int s = 0; s < 10000; ++s) {
            Rat pt(num(rng), 1000), pa(num(rng), 1000);
            pt.canonicalize();
            pa.canonicalize();
            bool covered = false;
            for (const auto& gp : grid) {
                // toric within delta (max-norm), abelian within sqrt(delta)
                if (rat_abs(gp.toric[0] - pt) <= delta &&
                    rat_abs(gp.abelian[0] - pa) * rat_abs(gp.abelian[0] - pa) <= delta) {
                    covered = true;
                    break;
                }
            }
            CHECK(covered);
        }
    }
}
