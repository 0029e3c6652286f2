#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sak/rational.hpp"

namespace sak {

/// Dense integer polynomial, little-endian coefficients, no trailing zeros
/// (the zero polynomial has an empty coefficient vector).
struct IntPoly {
    std::vector<Int> c;

    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { normalize(); }
    static IntPoly from(std::initializer_list<long> xs) {
        std::vector<Int> v;
        for (long x : xs) v.emplace_back(x);
        return IntPoly(std::move(v));
    }
    static IntPoly constant(Int k) { return IntPoly(std::vector<Int>{std::move(k)}); }
    static IntPoly x_power(int k) {
        std::vector<Int> v(k + 1, Int(0));
        v[k] = 1;
        return IntPoly(std::move(v));
    }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Int& lc() const { return c.back(); }
    Int coeff(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : Int(0); }

    bool operator==(const IntPoly& o) const { return c == o.c; }
    bool operator<(const IntPoly& o) const {  // deterministic ordering for reports
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (size_t i = c.size(); i-- > 0;)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

inline IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> v(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
    return IntPoly(std::move(v));
}

inline IntPoly poly_neg(const IntPoly& a) {
    IntPoly out = a;
    for (auto& x : out.c) x = -x;
    return out;
}

inline IntPoly poly_sub(const IntPoly& a, const IntPoly& b) { return poly_add(a, poly_neg(b)); }

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> v(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    }
    return IntPoly(std::move(v));
}

inline IntPoly poly_scale(const IntPoly& a, const Int& k) {
    if (k == 0) return {};
    IntPoly out = a;
    for (auto& x : out.c) x *= k;
    return out;
}

inline IntPoly poly_pow(IntPoly base, int e) {
    IntPoly acc = IntPoly::constant(Int(1));
    while (e > 0) {
        if (e & 1) acc = poly_mul(acc, base);
        base = poly_mul(base, base);
        e >>= 1;
    }
    return acc;
}

inline IntPoly derivative(const IntPoly& a) {
    if (a.c.size() <= 1) return {};
    std::vector<Int> v(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) v[i - 1] = a.c[i] * static_cast<long>(i);
    return IntPoly(std::move(v));
}

template <typename T>
T poly_eval(const IntPoly& a, const T& x) {
    T acc(0);
    for (size_t i = a.c.size(); i-- > 0;) acc = acc * x + T(a.c[i]);
    return acc;
}

inline Int content(const IntPoly& a) {
    Int g(0);
    for (const auto& x : a.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;  // 0 for the zero polynomial
}

/// a / content(a); sign of the leading coefficient is preserved.
inline IntPoly primitive_part(const IntPoly& a) {
    if (a.is_zero()) return {};
    Int g = content(a);
    IntPoly out = a;
    for (auto& x : out.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return out;
}

inline IntPoly with_positive_lc(const IntPoly& a) {
    return (!a.is_zero() && a.lc() < 0) ? poly_neg(a) : a;
}

/// Exact quotient when b divides a in Z[x]; empty otherwise.
inline std::optional<IntPoly> try_div_exact(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) fail(Module::heights, ErrorKind::domain, "division by zero polynomial");
    if (a.is_zero()) return IntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<Int> r = a.c;
    std::vector<Int> q(a.degree() - b.degree() + 1, Int(0));
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        Int top = r[k + b.degree()];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.lc().get_mpz_t())) return std::nullopt;
        Int f;
        mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), b.lc().get_mpz_t());
        q[k] = f;
        for (int i = 0; i <= b.degree(); ++i) r[k + i] -= f * b.c[i];
    }
    for (const auto& x : r)
        if (x != 0) return std::nullopt;
    return IntPoly(std::move(q));
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) a  mod  b.
inline IntPoly prem(const IntPoly& a, const IntPoly& b) {
    IntPoly r = a;
    const Int d = b.lc();
    int e = a.degree() - b.degree() + 1;
    while (!r.is_zero() && r.degree() >= b.degree()) {
        IntPoly t = poly_scale(poly_mul(IntPoly::x_power(r.degree() - b.degree()), b), r.lc());
        r = poly_sub(poly_scale(r, d), t);
        --e;
    }
    for (; e > 0; --e) r = poly_scale(r, d);
    return r;
}

/// Primitive gcd by the subresultant polynomial remainder sequence.
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) return with_positive_lc(b);
    if (b.is_zero()) return with_positive_lc(a);
    Int ca = content(a), cb = content(b), cg;
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    Int g(1), h(1);
    while (true) {
        int delta = a.degree() - b.degree();
        IntPoly r = prem(a, b);
        if (r.is_zero())
            return poly_scale(with_positive_lc(primitive_part(b)), cg);
        if (r.degree() == 0) return IntPoly::constant(cg);
        a = b;
        Int divisor = g * int_pow(h, delta);
        IntPoly next = r;
        for (auto& x : next.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), divisor.get_mpz_t());
        b = next;
        g = a.lc();
        if (delta > 0) {
            Int num = int_pow(g, delta);
            Int den = int_pow(h, delta - 1);
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
    }
}

/// Resultant by the subresultant PRS (Cohen, Algorithm 3.3.7).
inline Int resultant(IntPoly a, IntPoly b) {
    if (a.is_zero() || b.is_zero()) return Int(0);
    Int ca = content(a), cb = content(b);
    a = primitive_part(a);
    b = primitive_part(b);
    Int t = int_pow(ca, b.degree()) * int_pow(cb, a.degree());
    int s = 1;
    if (a.degree() < b.degree()) {
        if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
        std::swap(a, b);
    }
    if (b.degree() == 0) return Int(s) * t * int_pow(b.c[0], a.degree());
    Int g(1), h(1);
    while (true) {
        int delta = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
        IntPoly r = prem(a, b);
        a = b;
        if (r.is_zero()) return Int(0);
        Int divisor = g * int_pow(h, delta);
        IntPoly next = r;
        for (auto& x : next.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), divisor.get_mpz_t());
        b = next;
        g = a.lc();
        if (delta > 0) {
            Int num = int_pow(g, delta);
            Int den = int_pow(h, delta - 1);
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
        if (b.degree() == 0) {
            // h^{1-deg a} lc(b)^{deg a}
            Int num = int_pow(b.c[0], a.degree());
            Int den = int_pow(h, a.degree() - 1);
            Int out;
            mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            return Int(s) * t * out;
        }
    }
}

inline IntPoly squarefree_part(const IntPoly& a) {
    if (a.is_zero() || a.degree() == 0) return with_positive_lc(primitive_part(a));
    IntPoly g = primitive_part(poly_gcd(a, derivative(a)));
    auto q = try_div_exact(primitive_part(a), g);
    if (!q) fail(Module::heights, ErrorKind::domain, "squarefree division failed");
    return with_positive_lc(*q);
}

// ---------------------------------------------------------------------------
// Arithmetic in (Z/m)[x].  m is prime during factorization mod p and a prime
// power during Hensel lifting; divisions only ever use monic divisors there.

namespace modp {

using P = std::vector<Int>;  // little-endian mod-m coefficients in [0, m)

inline void norm(P& a, const Int& m) {
    for (auto& x : a) {
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline P from_int_poly(const IntPoly& f, const Int& m) {
    P a = f.c;
    norm(a, m);
    return a;
}

inline int deg(const P& a) { return static_cast<int>(a.size()) - 1; }

inline P add(P a, const P& b, const Int& m) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    norm(a, m);
    return a;
}

inline P sub(P a, const P& b, const Int& m) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    norm(a, m);
    return a;
}

inline P mul(const P& a, const P& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    P v(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) v[i + j] += a[i] * b[j];
    }
    norm(v, m);
    return v;
}

inline P scale(P a, const Int& k, const Int& m) {
    for (auto& x : a) x *= k;
    norm(a, m);
    return a;
}

inline Int inv_mod(const Int& a, const Int& m) {
    Int out;
    if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        fail(Module::heights, ErrorKind::domain, "non-invertible element mod m");
    return out;
}

// divisor must have invertible leading coefficient mod m
inline std::pair<P, P> divmod(const P& a, const P& b, const Int& m) {
    if (b.empty()) fail(Module::heights, ErrorKind::domain, "mod-m division by zero");
    P r = a, q;
    Int binv = inv_mod(b.back(), m);
    if (deg(a) >= deg(b)) q.assign(deg(a) - deg(b) + 1, Int(0));
    while (deg(r) >= deg(b)) {
        Int f = r.back() * binv;
        mpz_fdiv_r(f.get_mpz_t(), f.get_mpz_t(), m.get_mpz_t());
        int shift = deg(r) - deg(b);
        q[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
        norm(r, m);
    }
    norm(q, m);
    return {q, r};
}

inline P monic(const P& a, const Int& m) {
    if (a.empty()) return a;
    return scale(a, inv_mod(a.back(), m), m);
}

inline P gcd(P a, P b, const Int& m) {
    while (!b.empty()) {
        auto [q, r] = divmod(a, b, m);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, m);
}

inline P powmod(P base, Int e, const P& f, const Int& m) {
    P acc{Int(1)};
    base = divmod(base, f, m).second;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = divmod(mul(acc, base, m), f, m).second;
        base = divmod(mul(base, base, m), f, m).second;
        e >>= 1;
    }
    return acc;
}

// extended gcd: returns (g, s, t) with s a + t b = g, g monic
inline std::tuple<P, P, P> xgcd(P a, P b, const Int& m) {
    P s0{Int(1)}, s1, t0, t1{Int(1)};
    while (!b.empty()) {
        auto [q, r] = divmod(a, b, m);
        a = std::move(b);
        b = std::move(r);
        P s2 = sub(s0, mul(q, s1, m), m);
        P t2 = sub(t0, mul(q, t1, m), m);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.empty()) fail(Module::heights, ErrorKind::domain, "xgcd of zero polynomials");
    Int inv = inv_mod(a.back(), m);
    return {scale(a, inv, m), scale(s0, inv, m), scale(t0, inv, m)};
}

}  // namespace modp

namespace detail {

// deterministic source for the equal-degree splitting
struct SplitRng {
    uint64_t state;
    explicit SplitRng(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
};

// Cantor-Zassenhaus over F_p (p odd), f monic squarefree: irreducible monic factors.
inline std::vector<modp::P> factor_mod_p(const modp::P& f, const Int& p) {
    using namespace modp;
    std::vector<modp::P> out;
    std::vector<std::pair<modp::P, int>> tasks;  // (product of same-degree irreducibles, degree)

    // distinct-degree splitting
    modp::P rest = f;
    modp::P h{Int(0), Int(1)};  // x
    int d = 0;
    while (deg(rest) > 0) {
        ++d;
        if (2 * d > deg(rest)) {
            tasks.emplace_back(rest, deg(rest));
            break;
        }
        h = powmod(h, p, rest, p);
        modp::P hx = sub(h, modp::P{Int(0), Int(1)}, p);
        modp::P g = gcd(rest, hx, p);
        if (deg(g) > 0) {
            tasks.emplace_back(g, d);
            rest = divmod(rest, g, p).first;
            h = divmod(h, rest, p).second;
        }
    }

    // equal-degree splitting
    SplitRng rng(0xD1CEu + static_cast<uint64_t>(deg(f)) * 1315423911ULL);
    std::function<void(const modp::P&, int)> split = [&](const modp::P& g, int dd) {
        if (deg(g) == dd) {
            out.push_back(g);
            return;
        }
        Int exponent = (int_pow(p, dd) - 1) / 2;
        while (true) {
            modp::P r(deg(g), Int(0));
            for (auto& x : r) x = Int(static_cast<unsigned long>(rng.next() % 1000000007ULL));
            modp::norm(r, p);
            if (modp::deg(r) < 1) continue;
            modp::P s = powmod(r, exponent, g, p);
            s = sub(s, modp::P{Int(1)}, p);
            modp::P h2 = gcd(g, s, p);
            if (deg(h2) > 0 && deg(h2) < deg(g)) {
                split(h2, dd);
                split(divmod(g, h2, p).first, dd);
                return;
            }
        }
    };
    for (auto& [g, dd] : tasks) split(g, dd);
    std::sort(out.begin(), out.end());
    return out;
}

// One quadratic Hensel step: modulus m -> m2 (m2 <= m^2), all polynomials monic.
struct HenselPair {
    modp::P g, h, s, t;
};

inline HenselPair hensel_step(const IntPoly& f, const HenselPair& in, const Int& m,
                              const Int& m2) {
    using namespace modp;
    modp::P fm = from_int_poly(f, m2);
    modp::P e = sub(fm, mul(in.g, in.h, m2), m2);
    auto [q, r] = divmod(mul(in.s, e, m2), in.h, m2);
    HenselPair out;
    out.g = add(in.g, add(mul(in.t, e, m2), mul(q, in.g, m2), m2), m2);
    out.h = add(in.h, r, m2);
    modp::P b = sub(add(mul(in.s, out.g, m2), mul(in.t, out.h, m2), m2), modp::P{Int(1)}, m2);
    auto [c, d] = divmod(mul(in.s, b, m2), out.h, m2);
    out.s = sub(in.s, d, m2);
    out.t = sub(in.t, add(mul(in.t, b, m2), mul(c, out.g, m2), m2), m2);
    return out;
}

// Lift the mod-p factor list of monic squarefree f to mod p^k (factor tree).
inline std::vector<modp::P> hensel_lift_tree(const IntPoly& f, std::vector<modp::P> factors,
                                             const Int& p, const Int& target) {
    using namespace modp;
    if (factors.size() == 1) return {from_int_poly(f, target)};
    size_t half = factors.size() / 2;
    modp::P g0{Int(1)}, h0{Int(1)};
    for (size_t i = 0; i < half; ++i) g0 = mul(g0, factors[i], p);
    for (size_t i = half; i < factors.size(); ++i) h0 = mul(h0, factors[i], p);
    auto [one, s, t] = xgcd(g0, h0, p);
    if (deg(one) != 0)
        fail(Module::heights, ErrorKind::domain, "modular factors are not coprime");

    HenselPair pair{g0, h0, s, t};
    Int m = p;
    while (m < target) {
        Int m2 = m * m;
        if (m2 > target) m2 = target;  // target is a power of p, so m | m2 still holds
        pair = hensel_step(f, pair, m, m2);
        m = m2;
    }
    // reduce to the target modulus
    norm(pair.g, target);
    norm(pair.h, target);

    IntPoly gi(std::vector<Int>(pair.g.begin(), pair.g.end()));
    IntPoly hi(std::vector<Int>(pair.h.begin(), pair.h.end()));
    auto left = hensel_lift_tree(gi, {factors.begin(), factors.begin() + half}, p, target);
    auto right = hensel_lift_tree(hi, {factors.begin() + half, factors.end()}, p, target);
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

inline Int center_mod(const Int& x, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    if (r * 2 > m) r -= m;
    return r;
}

// factor a monic squarefree polynomial over Z
inline std::vector<IntPoly> zassenhaus_monic(const IntPoly& f) {
    if (f.degree() <= 1) return {f};

    // prime with f squarefree mod p
    Int p(0);
    std::vector<modp::P> modular;
    for (long cand : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L, 53L,
                      59L, 61L, 67L, 71L, 73L, 79L, 83L, 89L, 97L, 101L, 103L, 107L, 109L}) {
        Int q(cand);
        modp::P fp = modp::from_int_poly(f, q);
        if (modp::deg(fp) != f.degree()) continue;
        modp::P g = modp::gcd(fp, modp::from_int_poly(derivative(f), q), q);
        if (modp::deg(g) == 0) {
            p = q;
            modular = factor_mod_p(modp::monic(fp, q), q);
            break;
        }
    }
    if (p == 0) fail(Module::heights, ErrorKind::domain, "no usable factorization prime found");
    if (modular.size() == 1) return {f};

    // Landau-Mignotte style bound on coefficients of monic factors
    Int height(0);
    for (const auto& x : f.c)
        if (mpz_cmpabs(height.get_mpz_t(), x.get_mpz_t()) < 0) height = abs(x);
    Int bound = int_pow(Int(2), f.degree() + 1) * (f.degree() + 1) * height;
    Int target(p);
    while (target <= 2 * bound) target *= p;

    std::vector<modp::P> lifted = hensel_lift_tree(f, modular, p, target);

    // subset recombination
    std::vector<IntPoly> out;
    IntPoly rest = f;
    std::vector<modp::P> pool = lifted;
    size_t guard = 0;
    for (size_t take = 1; !pool.empty() && 2 * take <= pool.size();) {
        bool found = false;
        std::vector<int> idx(take);
        for (size_t i = 0; i < take; ++i) idx[i] = static_cast<int>(i);
        while (true) {
            if (++guard > (1u << 22))
                fail(Module::heights, ErrorKind::domain, "factor recombination too large");
            modp::P prod{Int(1)};
            for (int i : idx) prod = modp::mul(prod, pool[i], target);
            std::vector<Int> cand(prod.size());
            for (size_t i = 0; i < prod.size(); ++i) cand[i] = center_mod(prod[i], target);
            IntPoly candidate(std::move(cand));
            auto quotient = try_div_exact(rest, candidate);
            if (quotient) {
                out.push_back(candidate);
                rest = *quotient;
                std::vector<modp::P> next_pool;
                for (size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < idx.size() && static_cast<int>(i) == idx[j]) { ++j; continue; }
                    next_pool.push_back(pool[i]);
                }
                pool = std::move(next_pool);
                found = true;
                break;
            }
            // next subset
            int pos = static_cast<int>(take) - 1;
            while (pos >= 0 && idx[pos] == static_cast<int>(pool.size() - take + pos)) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (size_t i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!found) ++take;
    }
    if (rest.degree() > 0) out.push_back(rest);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Irreducible factorization over Z of a squarefree primitive polynomial with
/// positive leading coefficient; factors are primitive with positive lc.
inline std::vector<IntPoly> factor_squarefree_primitive(const IntPoly& q) {
    if (q.degree() <= 0) return {};
    if (q.degree() == 1) return {q};
    const Int l = q.lc();
    if (l == 1) return detail::zassenhaus_monic(q);

    // monic transform F(x) = l^(n-1) q(x/l); factors map back via pp(G(l x))
    const int n = q.degree();
    std::vector<Int> fc(n + 1);
    for (int i = 0; i <= n; ++i) fc[i] = q.coeff(i) * int_pow(l, n - 1 - i >= 0 ? n - 1 - i : 0);
    fc[n] = 1;
    IntPoly F(std::move(fc));
    std::vector<IntPoly> out;
    for (const auto& G : detail::zassenhaus_monic(F)) {
        std::vector<Int> gc(G.c.size());
        Int power(1);
        for (size_t i = 0; i < G.c.size(); ++i) {
            gc[i] = G.c[i] * power;
            power *= l;
        }
        out.push_back(with_positive_lc(primitive_part(IntPoly(std::move(gc)))));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Factorization {
    int unit = 1;     // overall sign
    Int content{1};   // positive content
    std::vector<std::pair<IntPoly, int>> factors;  // primitive irreducible, lc > 0
};

inline Factorization factor(const IntPoly& p) {
    if (p.is_zero()) fail(Module::heights, ErrorKind::domain, "factoring the zero polynomial");
    Factorization out;
    out.content = content(p);
    out.unit = p.lc() < 0 ? -1 : 1;
    IntPoly w = primitive_part(p);
    if (out.unit < 0) w = poly_neg(w);
    if (w.degree() == 0) return out;

    IntPoly sf = squarefree_part(w);
    for (const auto& h : factor_squarefree_primitive(sf)) {
        int mult = 0;
        IntPoly cur = w;
        while (true) {
            auto q = try_div_exact(cur, h);
            if (!q) break;
            ++mult;
            cur = *q;
        }
        out.factors.emplace_back(h, mult);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cyclotomic detection: an irreducible monic f of degree d is cyclotomic iff
// x^k = 1 mod f for some k with phi(k) = d (bounded search, conductor <= 10^4).

inline constexpr int kCyclotomicConductorBound = 10000;

namespace detail {

inline const std::vector<int>& euler_phi_table() {
    static const std::vector<int> table = [] {
        std::vector<int> phi(kCyclotomicConductorBound + 1);
        for (int i = 0; i <= kCyclotomicConductorBound; ++i) phi[i] = i;
        for (int i = 2; i <= kCyclotomicConductorBound; ++i)
            if (phi[i] == i)  // prime
                for (int j = i; j <= kCyclotomicConductorBound; j += i) phi[j] -= phi[j] / i;
        return phi;
    }();
    return table;
}

// x^k mod f over Z, f monic
inline IntPoly x_pow_mod_monic(Int k, const IntPoly& f) {
    auto reduce = [&](IntPoly a) {
        while (!a.is_zero() && a.degree() >= f.degree()) {
            Int top = a.lc();
            int shift = a.degree() - f.degree();
            for (int i = 0; i <= f.degree(); ++i) a.c[shift + i] -= top * f.c[i];
            a.normalize();
        }
        return a;
    };
    IntPoly acc = IntPoly::constant(Int(1));
    IntPoly base = reduce(IntPoly::x_power(1));
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = reduce(poly_mul(acc, base));
        base = reduce(poly_mul(base, base));
        k >>= 1;
    }
    return acc;
}

}  // namespace detail

inline bool is_cyclotomic(const IntPoly& f_in) {
    IntPoly f = with_positive_lc(f_in);
    int d = f.degree();
    if (d < 1 || f.lc() != 1) return false;
    Int c0 = f.coeff(0);
    if (c0 != 1 && c0 != -1) return false;
    const auto& phi = detail::euler_phi_table();
    const Int screen_p(1000003);
    for (int k = 1; k <= kCyclotomicConductorBound; ++k) {
        if (phi[k] != d) continue;
        // cheap screen mod a fixed prime, then the exact check
        modp::P fp = modp::from_int_poly(f, screen_p);
        modp::P xk = modp::powmod(modp::P{Int(0), Int(1)}, Int(k), fp, screen_p);
        if (!(xk.size() == 1 && xk[0] == 1)) continue;
        if (detail::x_pow_mod_monic(Int(k), f) == IntPoly::constant(Int(1))) return true;
    }
    return false;
}

}  // namespace sak
