#pragma once

#include <optional>
#include <vector>

#include "sak/algnum.hpp"
#include "sak/chow.hpp"  // SymMat + PSD test
#include "sak/rat_matrix.hpp"

namespace sak {

/// Point of the torus with algebraic coordinates, all nonzero.
struct TorusPointQbar {
    std::vector<AlgebraicNumber> coords;

    void validate() const {
        for (size_t i = 0; i < coords.size(); ++i)
            if (coords[i].is_zero())
                fail(Module::heights, ErrorKind::invariant, "torus coordinate is zero",
                     "/coords/" + std::to_string(i));
    }
    int rank() const { return static_cast<int>(coords.size()); }
};

/// Point of the abelian model: coordinate vector with a PSD Gram matrix; the
/// canonical height is the quadratic form value.
struct AbelianPoint {
    std::vector<Rat> v;
    SymMat gram;

    void validate() const {
        if (gram.rows() != static_cast<int>(v.size()))
            fail(Module::heights, ErrorKind::invariant, "Gram size mismatch", "/gram");
        if (!is_symmetric(gram))
            fail(Module::heights, ErrorKind::invariant, "Gram matrix not symmetric", "/gram");
        if (!is_positive_semidefinite(gram))
            fail(Module::heights, ErrorKind::invariant, "Gram matrix not PSD", "/gram");
    }
};

/// hat h_{pi* N}(p) = p^T Q p, exactly.
inline Rat abelian_model_height(const AbelianPoint& p) {
    p.validate();
    Rat acc(0);
    for (size_t i = 0; i < p.v.size(); ++i)
        for (size_t j = 0; j < p.v.size(); ++j)
            acc += p.v[i] * p.gram(static_cast<int>(i), static_cast<int>(j)) * p.v[j];
    return acc;
}

/// hat h_{M_G}(x) = sum_u 2 h(x_u): the canonical height of the standard
/// toric compactification divisor (each factor contributes E_0 + E_infty).
inline HeightValue toric_canonical_height(const TorusPointQbar& x, double eps = 1e-12) {
    x.validate();
    HeightValue out;
    for (const auto& c : x.coords) {
        auto h = weil_height(c, eps / std::max<size_t>(1, 2 * x.coords.size()));
        out.value += 2 * h.value;
        out.error += 2 * h.error;
    }
    return out;
}

namespace detail {

// x_1^{e_1} ... x_t^{e_t} with the library's resultant arithmetic
inline AlgebraicNumber monomial_value(const TorusPointQbar& x, const std::vector<long>& exps) {
    AlgebraicNumber acc = AlgebraicNumber::from_rational(Rat(1));
    for (size_t u = 0; u < exps.size(); ++u) {
        if (exps[u] == 0) continue;
        acc = alg_mul(acc, alg_pow(x.coords[u], exps[u]));
    }
    return acc;
}

}  // namespace detail

/// hat h of the graph-closure bundle of a rational toric matrix:
/// (1/n) sum_v 2 h( prod_u x_u^{n a_vu} ), independent of the denominator n.
inline HeightValue graph_canonical_height(const RatMatrix& phi_tor, const TorusPointQbar& x,
                                          double eps = 1e-12) {
    x.validate();
    if (phi_tor.cols() != x.rank())
        fail(Module::heights, ErrorKind::invariant, "matrix width != number of coordinates");
    Int n = phi_tor.denominator_lcm();
    HeightValue out;
    const double per = eps / std::max(1, 2 * phi_tor.rows());
    for (int v = 0; v < phi_tor.rows(); ++v) {
        std::vector<long> exps(x.rank());
        for (int u = 0; u < x.rank(); ++u) {
            Rat cleared = phi_tor(v, u) * n;
            exps[u] = cleared.get_num().get_si();
        }
        auto h = weil_height(detail::monomial_value(x, exps), per);
        out.value += 2 * h.value;
        out.error += 2 * h.error;
    }
    double nd = n.get_d();
    out.value /= nd;
    out.error = out.error / nd + 1e-15 * std::abs(out.value);
    return out;
}

/// Gap between the graph heights of two close toric maps together with the
/// certified bound l * hat h_{M_G}(x), l = sum_v max_u |a_uv - a'_uv|.
struct GapBound {
    HeightValue gap;
    HeightValue bound;
    Rat l{0};
};

inline GapBound close_homomorphism_gap(const RatMatrix& phi, const RatMatrix& phi_prime,
                                       const TorusPointQbar& x, double eps = 1e-12) {
    if (phi.rows() != phi_prime.rows() || phi.cols() != phi_prime.cols())
        fail(Module::heights, ErrorKind::invariant, "matrices of different shapes");
    GapBound out;
    for (int v = 0; v < phi.rows(); ++v) {
        Rat best(0);
        for (int u = 0; u < phi.cols(); ++u)
            best = std::max(best, rat_abs(phi(v, u) - phi_prime(v, u)));
        out.l += best;
    }
    auto h1 = graph_canonical_height(phi, x, eps / 4);
    auto h2 = graph_canonical_height(phi_prime, x, eps / 4);
    out.gap.value = std::abs(h1.value - h2.value);
    out.gap.error = h1.error + h2.error;
    auto base = toric_canonical_height(x, eps / 4);
    out.bound.value = to_double(out.l) * base.value;
    out.bound.error = to_double(out.l) * base.error + 1e-15 * std::abs(out.bound.value);
    return out;
}

// ---------------------------------------------------------------------------
// combined model points and height cones

/// Point of the combined model T x A; either part may be absent.
struct ModelPoint {
    TorusPointQbar toric;
    std::optional<AbelianPoint> abelian;

    void validate() const {
        toric.validate();
        if (abelian) abelian->validate();
    }
};

/// hat h_L = hat h_{M_G} + hat h_{pi* N}.
inline HeightValue combined_height(const ModelPoint& p, double eps = 1e-12) {
    HeightValue out = toric_canonical_height(p.toric, eps);
    if (p.abelian) {
        out.value += to_double(abelian_model_height(*p.abelian));
        out.error += 1e-15 * std::abs(out.value);
    }
    return out;
}

/// x - a in the combined model (coordinatewise quotient on the torus,
/// vector difference on the abelian part).
inline ModelPoint model_difference(const ModelPoint& x, const ModelPoint& a) {
    if (x.toric.rank() != a.toric.rank() || x.abelian.has_value() != a.abelian.has_value())
        fail(Module::heights, ErrorKind::invariant, "points of different model shapes");
    ModelPoint out;
    for (int u = 0; u < x.toric.rank(); ++u)
        out.toric.coords.push_back(alg_div(x.toric.coords[u], a.toric.coords[u]));
    if (x.abelian) {
        if (!(x.abelian->gram == a.abelian->gram))
            fail(Module::heights, ErrorKind::invariant, "points with different Gram matrices");
        AbelianPoint d;
        d.gram = x.abelian->gram;
        if (x.abelian->v.size() != a.abelian->v.size())
            fail(Module::heights, ErrorKind::invariant, "abelian coordinate length mismatch");
        for (size_t i = 0; i < x.abelian->v.size(); ++i)
            d.v.push_back(x.abelian->v[i] - a.abelian->v[i]);
        out.abelian = std::move(d);
    }
    return out;
}

struct HeightConeQuery {
    std::vector<ModelPoint> sigma;
    Rat epsilon;
    ModelPoint x;
};

/// Membership in the height cone C(Sigma, hat h_L, eps): some a in Sigma has
/// hat h_L(x - a) <= eps (1 + hat h_L(a)).  Comparisons happen at the
/// certified-error resolution of the height computations.
inline bool height_cone_member(const HeightConeQuery& q) {
    if (q.epsilon <= 0)
        fail(Module::heights, ErrorKind::invariant, "epsilon must be positive", "/epsilon");
    q.x.validate();
    for (const auto& a : q.sigma) {
        a.validate();
        auto diff = model_difference(q.x, a);
        auto hb = combined_height(diff);
        auto ha = combined_height(a);
        double rhs = to_double(q.epsilon) * (1 + ha.value);
        if (hb.value - hb.error <= rhs + to_double(q.epsilon) * ha.error) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// covering grids for the finite-approximation step

struct CoverBox {
    std::vector<std::pair<Rat, Rat>> toric;    // closed intervals per coordinate
    std::vector<std::pair<Rat, Rat>> abelian;
};

struct GridPair {
    std::vector<Rat> toric;
    std::vector<Rat> abelian;
};

/// All points of (1/n_delta) Z^dim flanking the box, covering every box point
/// within delta (max-norm) in the toric coordinates and within delta^(1/2) in
/// the abelian ones.  The asymmetric radii follow the ball shapes
/// B_delta(phi_tor) x B_sqrt(delta)(phi_ab).
inline std::vector<GridPair> cover_grid(const CoverBox& box, const Rat& delta, long n_delta) {
    if (delta <= 0) fail(Module::heights, ErrorKind::invariant, "delta must be positive");
    if (n_delta < 1) fail(Module::heights, ErrorKind::invariant, "n_delta must be positive");
    for (const auto& [lo, hi] : box.toric)
        if (lo > hi) return {};
    for (const auto& [lo, hi] : box.abelian)
        if (lo > hi) return {};

    Rat spacing(1, n_delta);
    spacing.canonicalize();
    if (!box.toric.empty() && spacing > delta)
        fail(Module::heights, ErrorKind::domain, "insufficient n_delta for the toric radius");
    if (!box.abelian.empty() && spacing * spacing > delta)
        fail(Module::heights, ErrorKind::domain, "insufficient n_delta for the abelian radius");

    auto axis_values = [&](const std::pair<Rat, Rat>& iv) {
        std::vector<Rat> vals;
        Int lo_idx, hi_idx;
        Rat lo_scaled = iv.first * n_delta, hi_scaled = iv.second * n_delta;
        mpz_fdiv_q(lo_idx.get_mpz_t(), lo_scaled.get_num().get_mpz_t(),
                   lo_scaled.get_den().get_mpz_t());
        mpz_cdiv_q(hi_idx.get_mpz_t(), hi_scaled.get_num().get_mpz_t(),
                   hi_scaled.get_den().get_mpz_t());
        for (Int k = lo_idx; k <= hi_idx; ++k) {
            Rat v(k, n_delta);
            v.canonicalize();
            vals.push_back(v);
        }
        return vals;
    };

    std::vector<std::vector<Rat>> axes;
    size_t total = 1;
    for (const auto& iv : box.toric) {
        axes.push_back(axis_values(iv));
        total *= axes.back().size();
        if (total > (1u << 22))
            fail(Module::heights, ErrorKind::domain, "cover grid too large");
    }
    for (const auto& iv : box.abelian) {
        axes.push_back(axis_values(iv));
        total *= axes.back().size();
        if (total > (1u << 22))
            fail(Module::heights, ErrorKind::domain, "cover grid too large");
    }

    std::vector<GridPair> out;
    std::vector<size_t> idx(axes.size(), 0);
    const size_t tdim = box.toric.size();
    while (true) {
        GridPair gp;
        for (size_t i = 0; i < axes.size(); ++i)
            (i < tdim ? gp.toric : gp.abelian).push_back(axes[i][idx[i]]);
        out.push_back(std::move(gp));
        size_t pos = 0;
        while (pos < axes.size() && ++idx[pos] == axes[pos].size()) idx[pos++] = 0;
        if (pos == axes.size()) break;
    }
    return out;
}

}  // namespace sak
