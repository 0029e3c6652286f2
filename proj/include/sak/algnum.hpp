#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sak/roots.hpp"

namespace sak {

/// Axis-aligned rectangle with rational corners, used as a root selector.
struct IsolatingBox {
    Rat re_lo, re_hi, im_lo, im_hi;

    bool well_formed() const { return re_lo <= re_hi && im_lo <= im_hi; }

    // conservative double bounds (outward)
    double relo_d() const { return std::nextafter(to_double(re_lo), -1e308); }
    double rehi_d() const { return std::nextafter(to_double(re_hi), 1e308); }
    double imlo_d() const { return std::nextafter(to_double(im_lo), -1e308); }
    double imhi_d() const { return std::nextafter(to_double(im_hi), 1e308); }

    // the disk certainly misses the closed rectangle
    bool certainly_excludes(const RootDisk& d) const {
        double dx = 0, dy = 0;
        if (d.center.real() < relo_d()) dx = relo_d() - d.center.real();
        if (d.center.real() > rehi_d()) dx = d.center.real() - rehi_d();
        if (d.center.imag() < imlo_d()) dy = imlo_d() - d.center.imag();
        if (d.center.imag() > imhi_d()) dy = d.center.imag() - imhi_d();
        return std::sqrt(dx * dx + dy * dy) > d.radius;
    }

    static IsolatingBox around(const RootDisk& d, double halfwidth) {
        IsolatingBox b;
        b.re_lo = Rat(d.center.real() - halfwidth);
        b.re_hi = Rat(d.center.real() + halfwidth);
        b.im_lo = Rat(d.center.imag() - halfwidth);
        b.im_hi = Rat(d.center.imag() + halfwidth);
        return b;
    }
    static IsolatingBox point(const Rat& v) { return {v, v, Rat(0), Rat(0)}; }
};

struct Approx {
    std::complex<double> z;
    double radius = 0.0;
};

inline constexpr int kAlgebraicDegreeCap = 64;

/// An algebraic number: its minimal polynomial (primitive, positive leading
/// coefficient, irreducible) together with a rational rectangle isolating the
/// selected root, plus a cached certified approximation.
class AlgebraicNumber {
  public:
    AlgebraicNumber() : AlgebraicNumber(from_rational(Rat(0))) {}

    static AlgebraicNumber from_rational(const Rat& v) {
        return AlgebraicNumber(
            IntPoly(std::vector<Int>{-v.get_num(), v.get_den()}), IsolatingBox::point(v),
            Approx{std::complex<double>(to_double(v), 0.0), 1e-18 * (1 + std::abs(to_double(v)))});
    }

    /// Load path: any nonzero integer polynomial plus a rectangle isolating
    /// exactly one of its roots.  Normalizes to the irreducible factor owning
    /// that root.
    static AlgebraicNumber from_poly_root(const IntPoly& poly, const IsolatingBox& box) {
        if (poly.is_zero())
            fail(Module::heights, ErrorKind::invariant, "zero defining polynomial", "/poly");
        if (!box.well_formed())
            fail(Module::heights, ErrorKind::invariant, "empty isolating rectangle", "/box");
        IntPoly sf = squarefree_part(poly);
        if (sf.degree() == 1) {
            Rat v(-sf.c[0], sf.c[1]);
            v.canonicalize();
            AlgebraicNumber a = from_rational(v);
            RootDisk d{std::complex<double>(to_double(v), 0.0), 0.0, 0};
            if (box.certainly_excludes(d))
                fail(Module::heights, ErrorKind::invariant, "rectangle contains no root", "/box");
            return a;
        }
        auto factors = factor_squarefree_primitive(sf);
        // find the unique factor with the unique surviving root disk
        for (unsigned prec = 192; prec <= (1u << 14); prec *= 2) {
            int hits = 0;
            const IntPoly* owner = nullptr;
            RootDisk chosen;
            for (const auto& h : factors) {
                for (const auto& d : certified_roots_at(h, prec)) {
                    if (!box.certainly_excludes(d)) {
                        ++hits;
                        owner = &h;
                        chosen = d;
                    }
                }
            }
            if (hits == 0)
                fail(Module::heights, ErrorKind::invariant, "rectangle contains no root", "/box");
            if (hits == 1)
                return AlgebraicNumber(*owner, box, Approx{chosen.center, chosen.radius})
                    .normalized();
        }
        fail(Module::heights, ErrorKind::invariant,
             "rectangle does not isolate a single root", "/box");
    }

    /// Internal fast path: irreducible factor plus a certified, well-separated
    /// disk around the selected root.
    static AlgebraicNumber from_irreducible(IntPoly minpoly, const RootDisk& disk,
                                            double halfwidth) {
        return AlgebraicNumber(std::move(minpoly), IsolatingBox::around(disk, halfwidth),
                               Approx{disk.center, disk.radius})
            .normalized();
    }

    const IntPoly& minimal_polynomial() const { return minpoly_; }
    const IsolatingBox& isolating_box() const { return box_; }
    Approx approx() const { return approx_; }
    int degree() const { return minpoly_.degree(); }

    bool is_rational() const { return minpoly_.degree() == 1; }
    Rat rational_value() const {
        Rat v(-minpoly_.c[0], minpoly_.c[1]);
        v.canonicalize();
        return v;
    }
    bool is_zero() const { return is_rational() && rational_value() == 0; }
    bool is_one() const { return is_rational() && rational_value() == 1; }

    /// Re-certifies the selected root until the enclosure radius is below the
    /// target (relative to the root size).
    Approx tight_approx(double target_radius) const {
        if (is_rational()) return approx_;
        if (approx_.radius <= target_radius) return approx_;
        Approx out = approx_;
        certified_roots(minpoly_, [&](const std::vector<RootDisk>& disks) {
            int hits = 0;
            for (const auto& d : disks)
                if (!box_.certainly_excludes(d)) {
                    ++hits;
                    out = {d.center, d.radius};
                }
            return hits == 1 && out.radius <= target_radius;
        });
        return out;
    }

  private:
    AlgebraicNumber(IntPoly p, IsolatingBox b, Approx a)
        : minpoly_(std::move(p)), box_(b), approx_(a) {}

    // degree-1 minimal polynomials collapse to the rational representation
    AlgebraicNumber normalized() const {
        if (minpoly_.degree() == 1) {
            Rat v(-minpoly_.c[0], minpoly_.c[1]);
            v.canonicalize();
            return from_rational(v);
        }
        return *this;
    }

    IntPoly minpoly_;
    IsolatingBox box_;
    Approx approx_;

    friend AlgebraicNumber alg_inverse(const AlgebraicNumber&);
};

// ---------------------------------------------------------------------------
// arithmetic via resultants and factor selection

namespace detail {

// exact Lagrange interpolation at integer nodes; values must be integers and
// the result must come out integral
inline IntPoly interpolate_integer(const std::vector<long>& nodes, const std::vector<Int>& values) {
    const int n = static_cast<int>(nodes.size());
    std::vector<Rat> acc(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        // Lagrange basis polynomial l_i scaled by values[i]
        std::vector<Rat> basis{Rat(1)};
        Rat denom(1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            basis.resize(basis.size() + 1, Rat(0));
            for (size_t k = basis.size(); k-- > 1;)
                basis[k] = basis[k - 1] - Rat(nodes[j]) * basis[k];
            basis[0] = -Rat(nodes[j]) * basis[0];
            denom *= Rat(nodes[i] - nodes[j]);
        }
        Rat w = Rat(values[i]) / denom;
        for (int k = 0; k < n; ++k) acc[k] += w * basis[k];
    }
    std::vector<Int> out(n);
    for (int k = 0; k < n; ++k) {
        if (!is_integer(acc[k]))
            fail(Module::heights, ErrorKind::domain, "resultant interpolation not integral");
        out[k] = acc[k].get_num();
    }
    return IntPoly(std::move(out));
}

// product polynomial: Res_y(A(y), y^m B(z/y)) as a polynomial in z
inline IntPoly product_resultant(const IntPoly& a, const IntPoly& b) {
    const int n = a.degree(), m = b.degree();
    const int dz = n * m;
    std::vector<long> nodes;
    std::vector<Int> values;
    for (long z = -(dz / 2); static_cast<int>(nodes.size()) < dz + 1; ++z) {
        // B*(y) = sum_j b_j z^j y^(m-j); leading coefficient b_0 (nonzero since
        // B is the minimal polynomial of a nonzero number)
        std::vector<Int> bc(m + 1);
        Int zp(1);
        for (int j = 0; j <= m; ++j) {
            bc[m - j] = b.c[j] * zp;
            zp *= z;
        }
        IntPoly bstar(std::move(bc));
        if (bstar.degree() != m) { continue; }  // b_0 = 0 cannot happen; keep shape honest
        nodes.push_back(z);
        values.push_back(resultant(a, bstar));
    }
    return interpolate_integer(nodes, values);
}

// power polynomial: Res_y(A(y), z - y^k)
inline IntPoly power_resultant(const IntPoly& a, int k) {
    const int n = a.degree();
    std::vector<long> nodes;
    std::vector<Int> values;
    for (long z = -(n / 2); static_cast<int>(nodes.size()) < n + 1; ++z) {
        std::vector<Int> gc(k + 1, Int(0));
        gc[0] = z;
        gc[k] = -1;
        nodes.push_back(z);
        values.push_back(resultant(a, IntPoly(std::move(gc))));
    }
    return interpolate_integer(nodes, values);
}

struct Enclosure {
    std::complex<double> z;
    double r;
};

inline Enclosure mul_enclosure(const Enclosure& a, const Enclosure& b) {
    double za = std::abs(a.z), zb = std::abs(b.z);
    return {a.z * b.z,
            (za * b.r + zb * a.r + a.r * b.r) * (1 + 1e-12) + 1e-14 * (1 + za * zb)};
}

// picks the unique irreducible factor whose root set meets the target
// enclosure, refining both sides on ambiguity
inline AlgebraicNumber select_root(
    const std::vector<IntPoly>& factors,
    const std::function<Enclosure(double)>& target_at,  // target enclosure given a shrink request
    Module mod) {
    double want = 1e-6;
    for (int attempt = 0; attempt < 10; ++attempt, want *= 1e-3) {
        Enclosure target = target_at(want);
        unsigned prec = 192u << attempt;
        int hits = 0;
        const IntPoly* owner = nullptr;
        RootDisk chosen;
        double sep = 1e308;
        for (const auto& h : factors) {
            auto disks = certified_roots_at(h, prec);
            for (const auto& d : disks) {
                double gap = std::abs(d.center - target.z) - d.radius - target.r;
                if (gap <= 0) {
                    ++hits;
                    owner = &h;
                    chosen = d;
                } else {
                    sep = std::min(sep, gap);
                }
            }
        }
        if (hits == 1) {
            // separation for a safe rectangular selector
            double halfwidth = std::max(chosen.radius * 2, 1e-300);
            if (sep < 1e300) halfwidth = std::min(halfwidth + sep / 4, sep / 3);
            halfwidth = std::max(halfwidth, chosen.radius * 1.25);
            return AlgebraicNumber::from_irreducible(*owner, chosen, halfwidth);
        }
    }
    fail(mod, ErrorKind::domain, "could not isolate the selected root of a resultant");
}

}  // namespace detail

inline AlgebraicNumber alg_inverse(const AlgebraicNumber& a) {
    if (a.is_zero()) fail(Module::heights, ErrorKind::domain, "inverse of zero");
    if (a.is_rational()) return AlgebraicNumber::from_rational(1 / a.rational_value());
    std::vector<Int> rc(a.minimal_polynomial().c.rbegin(), a.minimal_polynomial().c.rend());
    IntPoly rev = with_positive_lc(IntPoly(std::move(rc)));
    auto target = [&](double want) -> detail::Enclosure {
        auto ap = a.tight_approx(want * std::norm(a.approx().z) * 0.1 + 1e-300);
        double za = std::abs(ap.z);
        double r = ap.radius < za ? ap.radius / (za * (za - ap.radius)) : 1e308;
        return {1.0 / ap.z, r * (1 + 1e-12) + 1e-15 / za};
    };
    return detail::select_root({rev}, target, Module::heights);
}

inline AlgebraicNumber alg_mul(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.is_rational() && b.is_rational())
        return AlgebraicNumber::from_rational(a.rational_value() * b.rational_value());
    if (a.is_rational() || b.is_rational()) {
        const AlgebraicNumber& alg = a.is_rational() ? b : a;
        const Rat c = (a.is_rational() ? a : b).rational_value();
        if (c == 0) return AlgebraicNumber::from_rational(Rat(0));
        // minimal polynomial of c*beta: substitute x/c and clear denominators
        const IntPoly& bp = alg.minimal_polynomial();
        const int n = bp.degree();
        const Int p = c.get_num(), q = c.get_den();
        std::vector<Int> v(n + 1);
        for (int i = 0; i <= n; ++i) v[i] = bp.c[i] * int_pow(q, i) * int_pow(abs(p), n - i);
        IntPoly scaled = with_positive_lc(primitive_part(IntPoly(std::move(v))));
        auto target = [&](double want) -> detail::Enclosure {
            auto ap = alg.tight_approx(want / (1 + std::abs(to_double(c))));
            return {ap.z * to_double(c), ap.radius * std::abs(to_double(c)) * (1 + 1e-12) +
                                             1e-14 * (1 + std::abs(ap.z * to_double(c)))};
        };
        return detail::select_root({scaled}, target, Module::heights);
    }
    const int n = a.degree(), m = b.degree();
    if (n * m > kAlgebraicDegreeCap)
        fail(Module::heights, ErrorKind::domain,
             "degree cap exceeded in algebraic multiplication (" + std::to_string(n * m) + " > " +
                 std::to_string(kAlgebraicDegreeCap) + ")");
    IntPoly prod = detail::product_resultant(a.minimal_polynomial(), b.minimal_polynomial());
    auto factors = factor_squarefree_primitive(squarefree_part(prod));
    auto target = [&](double want) -> detail::Enclosure {
        double w = std::sqrt(want) * 1e-2;
        auto ea = a.tight_approx(w);
        auto eb = b.tight_approx(w);
        return detail::mul_enclosure({ea.z, ea.radius}, {eb.z, eb.radius});
    };
    return detail::select_root(factors, target, Module::heights);
}

inline AlgebraicNumber alg_div(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return alg_mul(a, alg_inverse(b));
}

inline AlgebraicNumber alg_pow(const AlgebraicNumber& a, long k) {
    if (k == 0) {
        if (a.is_zero()) fail(Module::heights, ErrorKind::domain, "0^0");
        return AlgebraicNumber::from_rational(Rat(1));
    }
    if (k < 0) return alg_pow(alg_inverse(a), -k);
    if (k == 1) return a;
    if (k > 4096) fail(Module::heights, ErrorKind::domain, "exponent cap exceeded");
    if (a.is_rational()) return AlgebraicNumber::from_rational(rat_pow(a.rational_value(), k));
    IntPoly pk = detail::power_resultant(a.minimal_polynomial(), static_cast<int>(k));
    auto factors = factor_squarefree_primitive(squarefree_part(pk));
    auto target = [&](double want) -> detail::Enclosure {
        auto ap = a.tight_approx(std::min(1e-8, want / k));
        detail::Enclosure acc{1.0, 0.0}, base{ap.z, ap.radius};
        long e = k;
        while (e > 0) {
            if (e & 1) acc = detail::mul_enclosure(acc, base);
            base = detail::mul_enclosure(base, base);
            e >>= 1;
        }
        return acc;
    };
    return detail::select_root(factors, target, Module::heights);
}

// ---------------------------------------------------------------------------

inline bool is_root_of_unity(const AlgebraicNumber& a) {
    if (a.is_zero()) return false;
    if (a.is_rational()) {
        Rat v = a.rational_value();
        return v == 1 || v == -1;
    }
    auto ap = a.approx();
    if (std::abs(std::abs(ap.z) - 1.0) > ap.radius + 1e-9) return false;
    return is_cyclotomic(a.minimal_polynomial());
}

struct HeightValue {
    double value = 0.0;
    double error = 0.0;
};

/// Logarithmic Weil height via the Mahler measure of the minimal polynomial:
/// h = (1/deg)(log|lc| + sum log max(1, |root_i|)), certified.
inline HeightValue weil_height(const AlgebraicNumber& a, double eps = 1e-12) {
    if (a.is_zero()) fail(Module::heights, ErrorKind::domain, "height of zero");
    if (a.is_rational()) {
        Rat v = a.rational_value();
        Int num = abs(v.get_num()), den = v.get_den();
        const Int& big = num > den ? num : den;
        if (big == 1) return {0.0, 0.0};
        signed long e2;
        double mant = mpz_get_d_2exp(&e2, big.get_mpz_t());
        double h = std::log(mant) + static_cast<double>(e2) * std::log(2.0);
        return {h, 1e-14 * (1 + h)};
    }
    if (is_root_of_unity(a)) return {0.0, 0.0};
    auto m = mahler_log(a.minimal_polynomial(), eps * a.degree() * 0.9);
    HeightValue out{m.value / a.degree(), m.error / a.degree()};
    if (out.value < 0 && out.value > -out.error) out.value = 0;
    return out;
}

}  // namespace sak
