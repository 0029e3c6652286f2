#pragma once

#include <map>
#include <memory>
#include <vector>

#include "sak/rat_matrix.hpp"

namespace sak {

/// Chow ring of a product of projective spaces:
/// Z[H_1]/(H_1^{n_1+1}) (x) ... (x) Z[H_m]/(H_m^{n_m+1}).
struct MultiProjRing {
    std::vector<int> factor_dims;

    explicit MultiProjRing(std::vector<int> dims) : factor_dims(std::move(dims)) {
        for (int n : factor_dims)
            if (n < 1) fail(Module::chow, ErrorKind::invariant, "factor dimension must be >= 1");
    }
    size_t factors() const { return factor_dims.size(); }
    bool operator==(const MultiProjRing& o) const { return factor_dims == o.factor_dims; }
};

using RingPtr = std::shared_ptr<const MultiProjRing>;

/// Truncated multilinear integer polynomial in the hyperplane generators.
/// Exponents never exceed the factor dimensions; zero coefficients are not stored.
class ChowClass {
  public:
    using Monomial = std::vector<int>;

    explicit ChowClass(RingPtr ring) : ring_(std::move(ring)) {}

    static ChowClass generator(const RingPtr& ring, size_t factor, int power = 1) {
        ChowClass c(ring);
        Monomial m(ring->factors(), 0);
        m[factor] = power;
        c.add_term(m, Int(1));
        return c;
    }
    static ChowClass one(const RingPtr& ring) {
        ChowClass c(ring);
        c.add_term(Monomial(ring->factors(), 0), Int(1));
        return c;
    }

    const RingPtr& ring() const { return ring_; }
    const std::map<Monomial, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& m, const Int& coeff) {
        if (coeff == 0) return;
        if (m.size() != ring_->factors())
            fail(Module::chow, ErrorKind::invariant, "monomial length mismatch");
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] < 0) fail(Module::chow, ErrorKind::invariant, "negative exponent");
            if (m[i] > ring_->factor_dims[i]) return;  // truncated away
        }
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    ChowClass operator+(const ChowClass& o) const {
        require_same_ring(o);
        ChowClass out = *this;
        for (const auto& [m, c] : o.terms_) out.add_term(m, c);
        return out;
    }

    ChowClass scaled(const Int& k) const {
        ChowClass out(ring_);
        if (k == 0) return out;
        for (const auto& [m, c] : terms_) out.add_term(m, c * k);
        return out;
    }

    bool operator==(const ChowClass& o) const {
        return *ring_ == *o.ring_ && terms_ == o.terms_;
    }

  private:
    void require_same_ring(const ChowClass& o) const {
        if (!(*ring_ == *o.ring_)) fail(Module::chow, ErrorKind::invariant, "ring mismatch");
    }

    RingPtr ring_;
    std::map<Monomial, Int> terms_;

    friend ChowClass chow_mul(const ChowClass&, const ChowClass&);
};

/// Product in the truncated polynomial ring; monomials exceeding a factor
/// dimension vanish.
inline ChowClass chow_mul(const ChowClass& a, const ChowClass& b) {
    a.require_same_ring(b);
    ChowClass out(a.ring());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            ChowClass::Monomial m(ma.size());
            bool alive = true;
            for (size_t i = 0; i < ma.size(); ++i) {
                m[i] = ma[i] + mb[i];
                if (m[i] > a.ring()->factor_dims[i]) { alive = false; break; }
            }
            if (alive) out.add_term(m, ca * cb);
        }
    return out;
}

/// Coefficient of the top monomial prod_i H_i^{n_i}; 0 when absent.
inline Int chow_degree(const ChowClass& c) {
    ChowClass::Monomial top(c.ring()->factor_dims.begin(), c.ring()->factor_dims.end());
    auto it = c.terms().find(top);
    return it == c.terms().end() ? Int(0) : it->second;
}

// ---------------------------------------------------------------------------
// Graph closures of monomial maps G_m^t -> G_m^{t'} inside (P^1)^t x (P^1)^{t'}.

using SmallIntMat = std::vector<std::vector<long>>;  // a[v][u], v < t', u < t

inline RingPtr graph_ring(int t, int t_prime) {
    return std::make_shared<MultiProjRing>(std::vector<int>(t + t_prime, 1));
}

/// [closure of the graph of x -> (prod_u x_u^{a_uv})_v] =
/// prod_v ( sum_u |a_uv| eps_u + eps'_v ).
inline ChowClass graph_closure_class(const SmallIntMat& a, int t, int t_prime) {
    if (static_cast<int>(a.size()) != t_prime)
        fail(Module::chow, ErrorKind::invariant, "matrix row count != t'");
    RingPtr ring = graph_ring(t, t_prime);
    ChowClass cls = ChowClass::one(ring);
    for (int v = 0; v < t_prime; ++v) {
        if (static_cast<int>(a[v].size()) != t)
            fail(Module::chow, ErrorKind::invariant, "matrix column count != t");
        ChowClass factor(ring);
        for (int u = 0; u < t; ++u) {
            long e = a[v][u] < 0 ? -a[v][u] : a[v][u];
            if (e != 0) {
                ChowClass::Monomial m(ring->factors(), 0);
                m[u] = 1;
                factor.add_term(m, Int(e));
            }
        }
        ChowClass::Monomial mp(ring->factors(), 0);
        mp[t + v] = 1;
        factor.add_term(mp, Int(1));
        cls = chow_mul(cls, factor);
    }
    return cls;
}

/// deg( c1(pr1* M_t)^s . c1(pr2* M_{t'})^{t-s} . [graph closure] ), by the
/// cancellation-simplified closed form
///   2^t s! (t-s)! sum |a_{u_1 v_1} ... a_{u_{t-s} v_{t-s}}|
/// over distinct u_1..u_{t-s} and increasing v_1 < ... < v_{t-s}.
inline Int toric_intersection_degree(const SmallIntMat& a, int t, int t_prime, int s) {
    if (s < 0 || s > t) fail(Module::chow, ErrorKind::invariant, "s out of range [0, t]");
    if (static_cast<int>(a.size()) != t_prime)
        fail(Module::chow, ErrorKind::invariant, "matrix row count != t'");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != t)
            fail(Module::chow, ErrorKind::invariant, "matrix column count != t");
    const int picks = t - s;
    if (picks > t_prime) return 0;

    Int sum(0);
    // iterate increasing v-tuples, then injective assignments u_i for each v_i
    std::vector<int> vs(picks);
    std::function<void(int, int)> choose_vs = [&](int pos, int start) {
        if (pos == picks) {
            std::vector<int> us(picks);
            std::vector<bool> used(t, false);
            std::function<void(int)> choose_us = [&](int p) {
                if (p == picks) {
                    Int prod(1);
                    for (int i = 0; i < picks; ++i) {
                        long e = a[vs[i]][us[i]];
                        prod *= Int(e < 0 ? -e : e);
                    }
                    sum += prod;
                    return;
                }
                for (int u = 0; u < t; ++u) {
                    if (used[u]) continue;
                    used[u] = true;
                    us[p] = u;
                    choose_us(p + 1);
                    used[u] = false;
                }
            };
            choose_us(0);
            return;
        }
        for (int v = start; v < t_prime; ++v) {
            vs[pos] = v;
            choose_vs(pos + 1, v + 1);
        }
    };
    choose_vs(0, 0);

    Int factor = int_pow(Int(2), t);
    for (int i = 2; i <= s; ++i) factor *= i;
    for (int i = 2; i <= picks; ++i) factor *= i;
    return factor * sum;
}

// ---------------------------------------------------------------------------
// Abelian-side intersection degrees via Gram matrices.
//
// A product of elliptic-curve factors carries line bundles whose hermitian
// forms are encoded by rational symmetric positive semidefinite g x g Gram
// matrices; top self-intersection is g! det(Q), and mixed degrees are the
// multilinear polarization of the determinant.  This encodes exactly the
// quadraticity used by the sigma_s decomposition.

using SymMat = RatMatrix;

inline Rat rat_det(RatMatrix m) {
    if (m.rows() != m.cols()) fail(Module::chow, ErrorKind::invariant, "det of non-square");
    const int n = m.rows();
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m(i, c) != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Rat inv = 1 / m(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) * inv;
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

inline bool is_symmetric(const RatMatrix& q) {
    if (q.rows() != q.cols()) return false;
    for (int i = 0; i < q.rows(); ++i)
        for (int j = i + 1; j < q.cols(); ++j)
            if (q(i, j) != q(j, i)) return false;
    return true;
}

/// Exact PSD test by symmetric elimination: a zero diagonal pivot forces its
/// whole row to vanish, otherwise the pivot must be positive.
inline bool is_positive_semidefinite(RatMatrix q) {
    if (!is_symmetric(q)) return false;
    const int n = q.rows();
    for (int k = 0; k < n; ++k) {
        if (q(k, k) < 0) return false;
        if (q(k, k) == 0) {
            for (int j = k; j < n; ++j)
                if (q(k, j) != 0) return false;
            continue;
        }
        Rat inv = 1 / q(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (q(i, k) == 0) continue;
            Rat f = q(i, k) * inv;
            for (int j = k; j < n; ++j) q(i, j) -= f * q(k, j);
        }
        for (int i = k + 1; i < n; ++i) q(k, i) = 0;  // keep symmetry bookkeeping simple
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < i; ++j) q(j, i) = q(i, j);
    }
    return true;
}

/// deg( c1(L_{Q_1}) ... c1(L_{Q_g}) ) = g! x (multilinear polarization of det)
/// evaluated on the listed Gram matrices (one per factor, repeats allowed).
inline Rat mixed_abelian_degree(const std::vector<SymMat>& grams) {
    const int g = static_cast<int>(grams.size());
    if (g == 0) return Rat(1);  // zero-dimensional abelian part
    const int n = grams[0].rows();
    if (n != g)
        fail(Module::chow, ErrorKind::invariant, "need exactly g Gram matrices of size g");
    // polarization via inclusion-exclusion over subsets
    Rat acc(0);
    for (int mask = 1; mask < (1 << g); ++mask) {
        RatMatrix s(n, n);
        int bits = 0;
        for (int i = 0; i < g; ++i)
            if (mask & (1 << i)) {
                ++bits;
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) s(p, q) += grams[i](p, q);
            }
        Rat term = rat_det(s);
        if ((g - bits) % 2 == 1) term = -term;
        acc += term;
    }
    return acc;  // inclusion-exclusion of det(sum) equals g! * polarization
}

// ---------------------------------------------------------------------------
// beta_i / gamma_i intersection functionals for [X] = [G].

/// Toric/abelian splitting data for the beta/gamma evaluation: the abelian map
/// phi_ab (g' x g), the degrees of the target product polarization, and the
/// Gram matrix of the abelian part of the reference bundle L.
struct AbelianDegreeData {
    RatMatrix phi_ab;                // g' x g
    std::vector<Rat> target_degrees; // length g', all > 0 (ample product polarization)
    SymMat base_gram;                // g x g, PSD (abelian part of L)

    int g() const { return phi_ab.cols(); }
    int g_prime() const { return phi_ab.rows(); }

    void validate() const {
        if (static_cast<int>(target_degrees.size()) != g_prime())
            fail(Module::chow, ErrorKind::invariant, "target degree count != g'");
        for (const auto& d : target_degrees)
            if (d <= 0) fail(Module::chow, ErrorKind::invariant, "target degree must be positive");
        if (base_gram.rows() != g() || !is_positive_semidefinite(base_gram))
            fail(Module::chow, ErrorKind::invariant, "base Gram must be g x g PSD");
    }

    // Gram of phi_ab^* N' = phi^T diag(target degrees) phi
    SymMat pullback_gram() const {
        const int gg = g();
        SymMat q(gg, gg);
        for (int p = 0; p < gg; ++p)
            for (int r = 0; r < gg; ++r) {
                Rat acc(0);
                for (int v = 0; v < g_prime(); ++v)
                    acc += phi_ab(v, p) * target_degrees[v] * phi_ab(v, r);
                q(p, r) = acc;
            }
        return q;
    }
};

enum class BetaGamma { beta, gamma };

/// The intersection functionals of the alpha estimate, evaluated for the
/// cycle [G] on the graph compactification:
///   beta_i  = norm^i deg( c1(M_Gamma)^i  c1((phi_ab o pi)^* N')^{r-i} )
///   gamma_i = norm^i deg( c1(M_Gamma)^i  c1((phi_ab o pi)^* N')^{r-1-i} c1(q^* L) )
/// with norm = max-abs-entry(phi_tor) + max-abs-entry(phi_ab), r = t + g.
/// Both factor through fibered toric degrees times abelian Gram degrees; the
/// isogeny argument kills every index except i = t (beta) and i in {t-1, t}
/// (gamma).  Rational inputs are handled by the Z-homogeneous extension of
/// degree 2r (beta) and 2r-2 (gamma).
inline Rat beta_gamma_eval(const RatMatrix& phi_tor, const AbelianDegreeData& ab, int i,
                           BetaGamma which) {
    ab.validate();
    const int t = phi_tor.cols();
    const int t_prime = phi_tor.rows();
    const int g = ab.g();
    const int r = t + g;
    if (which == BetaGamma::beta && (i < 0 || i > r))
        fail(Module::chow, ErrorKind::invariant, "beta index out of range [0, r]");
    if (which == BetaGamma::gamma && (i < 0 || i > r - 1))
        fail(Module::chow, ErrorKind::invariant, "gamma index out of range [0, r-1]");

    // joint denominator so that scaling is a single homogeneous dilation
    Int d = phi_tor.denominator_lcm();
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), ab.phi_ab.denominator_lcm().get_mpz_t());
    RatMatrix pt = phi_tor.scaled(Rat(d));
    AbelianDegreeData scaled = ab;
    scaled.phi_ab = ab.phi_ab.scaled(Rat(d));

    SmallIntMat a(t_prime, std::vector<long>(t));
    for (int v = 0; v < t_prime; ++v)
        for (int u = 0; u < t; ++u) a[v][u] = static_cast<long>(pt(v, u).get_num().get_si());

    Rat norm = pt.max_abs_entry() + scaled.phi_ab.max_abs_entry();
    SymMat qphi = scaled.pullback_gram();

    Rat value(0);
    if (which == BetaGamma::beta) {
        if (i == t) {
            std::vector<SymMat> grams(g, qphi);
            value = rat_pow(norm, i) * Rat(toric_intersection_degree(a, t, t_prime, 0)) *
                    mixed_abelian_degree(grams);
        }
    } else {
        if (i == t - 1 && t >= 1) {
            std::vector<SymMat> grams(g, qphi);
            value = rat_pow(norm, i) * Rat(toric_intersection_degree(a, t, t_prime, 1)) *
                    mixed_abelian_degree(grams);
        } else if (i == t && g >= 1) {
            std::vector<SymMat> grams(g, qphi);
            grams[0] = scaled.base_gram;
            value = rat_pow(norm, i) * Rat(toric_intersection_degree(a, t, t_prime, 0)) *
                    mixed_abelian_degree(grams);
        }
    }
    const int degree = which == BetaGamma::beta ? 2 * r : 2 * r - 2;
    return value / rat_pow(Rat(d), degree);
}

// ---------------------------------------------------------------------------

struct AlphaResult {
    Rat alpha;
    bool siu_holds = false;
    bool nothing_to_prove = false;  // u = 0 branch
};

/// alpha = u / max{1, 2r v} together with the bigness inequality check
/// v_s^r u >= 2r v_s^{r-1} u v on the scaled bundles (v_s = max{1, 2r v}).
inline AlphaResult alpha_and_siu(const Rat& u, const Rat& v, int r) {
    if (r < 1) fail(Module::chow, ErrorKind::invariant, "dimension r must be >= 1");
    if (u < 0 || v < 0) fail(Module::chow, ErrorKind::invariant, "nef degrees must be >= 0");
    AlphaResult out;
    Rat v_scaled = std::max(Rat(1), Rat(2 * r * v));
    out.alpha = u / v_scaled;
    out.nothing_to_prove = (u == 0);
    out.siu_holds = rat_pow(v_scaled, r) * u >= Rat(2 * r) * rat_pow(v_scaled, r - 1) * u * v;
    return out;
}

}  // namespace sak
