#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "sak/intpoly.hpp"

namespace sak {

/// Certified enclosure of one root: the disk |z - center| <= radius contains
/// it.  Disks belonging to one cluster component jointly contain as many
/// roots as the component has disks.
struct RootDisk {
    std::complex<double> center;
    double radius = 0.0;
    int cluster = -1;  // component id after merging
};

namespace detail {

// complex arithmetic over GMP floats at a fixed working precision
struct CF {
    mpf_class re, im;
    CF() : re(0, 64), im(0, 64) {}
    CF(mpf_class r, mpf_class i) : re(std::move(r)), im(std::move(i)) {}
    static CF make(double r, double i, unsigned prec) {
        return CF(mpf_class(r, prec), mpf_class(i, prec));
    }
};

inline CF cf_add(const CF& a, const CF& b) { return CF(a.re + b.re, a.im + b.im); }
inline CF cf_sub(const CF& a, const CF& b) { return CF(a.re - b.re, a.im - b.im); }
inline CF cf_mul(const CF& a, const CF& b) {
    return CF(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline mpf_class cf_norm2(const CF& a) { return a.re * a.re + a.im * a.im; }
inline CF cf_div(const CF& a, const CF& b) {
    mpf_class n2 = cf_norm2(b);
    return CF((a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2);
}
inline mpf_class cf_abs(const CF& a) { return sqrt(cf_norm2(a)); }

inline CF eval_poly(const std::vector<CF>& coeffs, const CF& z, unsigned prec) {
    CF acc = CF::make(0, 0, prec);
    for (size_t i = coeffs.size(); i-- > 0;) acc = cf_add(cf_mul(acc, z), coeffs[i]);
    return acc;
}

}  // namespace detail

/// Aberth-Ehrlich iteration over GMP floats with a-posteriori Weierstrass
/// certification: the union of the returned disks contains every root of f,
/// and each cluster of k mutually overlapping disks contains exactly k roots.
/// Requires f squarefree of degree >= 1.
inline std::vector<RootDisk> certified_roots_at(const IntPoly& f, unsigned prec) {
    using namespace detail;
    const int d = f.degree();
    if (d < 1) fail(Module::heights, ErrorKind::domain, "root finding needs degree >= 1");

    std::vector<CF> c(d + 1), dc(d);
    for (int i = 0; i <= d; ++i) c[i] = CF(mpf_class(f.c[i], prec), mpf_class(0, prec));
    for (int i = 1; i <= d; ++i) dc[i - 1] = CF(mpf_class(f.c[i] * i, prec), mpf_class(0, prec));

    // Cauchy bound 1 + max |a_i| / |a_d|
    mpf_class bound(1, prec);
    for (int i = 0; i < d; ++i) {
        mpf_class q = abs(mpf_class(f.c[i], prec)) / abs(mpf_class(f.c[d], prec));
        if (q > bound) bound = q;
    }
    bound += 1;

    std::vector<CF> z(d);
    for (int i = 0; i < d; ++i) {
        double theta = 2.0 * M_PI * (i + 0.353) / d + 0.4;
        double rho = 0.5 + 0.45 * ((i * 7919) % 101) / 101.0;
        z[i] = CF(bound * mpf_class(rho * std::cos(theta), prec),
                  bound * mpf_class(rho * std::sin(theta), prec));
    }

    mpf_class tiny(1, prec);
    tiny >>= static_cast<unsigned long>(prec > 24 ? prec - 12 : 12);

    const int max_iters = 60 + 12 * d;
    for (int iter = 0; iter < max_iters; ++iter) {
        mpf_class worst(0, prec);
        for (int i = 0; i < d; ++i) {
            CF p = eval_poly(c, z[i], prec);
            if (cf_norm2(p) == 0) continue;
            CF pd = eval_poly(dc, z[i], prec);
            if (cf_norm2(pd) == 0) {  // nudge off a critical point
                z[i] = cf_add(z[i], CF::make(1e-3, 1.3e-3, prec));
                worst = bound;
                continue;
            }
            CF newton = cf_div(p, pd);
            CF s = CF::make(0, 0, prec);
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                s = cf_add(s, cf_div(CF::make(1, 0, prec), cf_sub(z[i], z[j])));
            }
            CF denom = cf_sub(CF::make(1, 0, prec), cf_mul(newton, s));
            CF w = cf_norm2(denom) == 0 ? newton : cf_div(newton, denom);
            z[i] = cf_sub(z[i], w);
            mpf_class mag = cf_abs(w) / (cf_abs(z[i]) + 1);
            if (mag > worst) worst = mag;
        }
        if (worst < tiny) break;
    }

    // Weierstrass disks: |root_i - z_i| <= d |f(z_i) / (lc prod (z_i - z_j))|
    std::vector<RootDisk> disks(d);
    CF lc = c[d];
    for (int i = 0; i < d; ++i) {
        CF p = eval_poly(c, z[i], prec);
        CF denom = lc;
        for (int j = 0; j < d; ++j)
            if (j != i) denom = cf_mul(denom, cf_sub(z[i], z[j]));
        double w = cf_norm2(denom) == 0 ? 1e300 : mpf_class(cf_abs(cf_div(p, denom))).get_d();
        disks[i].center = {z[i].re.get_d(), z[i].im.get_d()};
        // inflate for the double conversion and the float rounding of the bound
        disks[i].radius = d * w * (1.0 + 1e-12) + std::abs(disks[i].center.real()) * 1e-15 +
                          std::abs(disks[i].center.imag()) * 1e-15 + 1e-300;
    }

    // merge overlapping disks into cluster components
    std::vector<int> parent(d);
    for (int i = 0; i < d; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(disks[i].center - disks[j].center) <= disks[i].radius + disks[j].radius)
                parent[find(i)] = find(j);
    for (int i = 0; i < d; ++i) disks[i].cluster = find(i);
    return disks;
}

/// Repeats the certification at doubling precision until `good_enough`
/// accepts the disk set.
inline std::vector<RootDisk> certified_roots(
    const IntPoly& f, const std::function<bool(const std::vector<RootDisk>&)>& good_enough,
    unsigned start_prec = 192, unsigned max_prec = 1u << 14) {
    for (unsigned prec = start_prec; prec <= max_prec; prec *= 2) {
        auto disks = certified_roots_at(f, prec);
        if (good_enough(disks)) return disks;
    }
    fail(Module::heights, ErrorKind::domain, "root certification did not converge");
}

inline bool disks_pairwise_disjoint(const std::vector<RootDisk>& disks) {
    for (size_t i = 0; i < disks.size(); ++i)
        for (size_t j = i + 1; j < disks.size(); ++j)
            if (std::abs(disks[i].center - disks[j].center) <=
                disks[i].radius + disks[j].radius)
                return false;
    return true;
}

/// Isolated roots (pairwise disjoint certified disks), sorted by (re, im).
inline std::vector<RootDisk> isolated_roots(const IntPoly& f_squarefree) {
    auto disks = certified_roots(f_squarefree, disks_pairwise_disjoint);
    std::sort(disks.begin(), disks.end(), [](const RootDisk& a, const RootDisk& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return disks;
}

// ---------------------------------------------------------------------------
// Mahler measure:  log M(f) = log |lc| + sum over roots of log max(1, |root|),
// computed with a certified error bound from the root enclosures.

struct CertifiedValue {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// per-cluster contribution bounds from the disk enclosures
inline bool mahler_error_within(const std::vector<RootDisk>& disks, double eps, double* out_val,
                                double* out_err) {
    double lo = 0, hi = 0;
    std::vector<std::pair<double, double>> ranges(disks.size(), {1e308, 0});
    for (const auto& disk : disks) {
        auto& r = ranges[disk.cluster];
        double a = std::max(0.0, std::abs(disk.center) - disk.radius);
        double b = std::abs(disk.center) + disk.radius;
        r.first = std::min(r.first, a);
        r.second = std::max(r.second, b);
    }
    for (const auto& disk : disks) {
        const auto& r = ranges[disk.cluster];
        lo += std::log(std::max(1.0, r.first));
        hi += std::log(std::max(1.0, r.second));
    }
    *out_val = 0.5 * (lo + hi);
    *out_err = 0.5 * (hi - lo) + 1e-14 * (1.0 + std::abs(hi));
    return *out_err <= eps;
}

}  // namespace detail

/// log of the Mahler measure of f (any nonzero integer polynomial), certified
/// within eps.  Multiplicities are handled through the squarefree split.
inline CertifiedValue mahler_log(const IntPoly& f, double eps = 1e-13) {
    if (f.is_zero()) fail(Module::heights, ErrorKind::domain, "Mahler measure of zero");
    CertifiedValue out;
    // log |lc| exactly enough: split into mantissa and exponent
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, f.lc().get_mpz_t());
    out.value = std::log(std::abs(mant)) + static_cast<double>(exp2) * std::log(2.0);
    out.error = 1e-14 * (1.0 + std::abs(out.value));
    if (f.degree() < 1) return out;

    IntPoly work = primitive_part(f);
    // roots of f = roots of its squarefree factors with multiplicity
    IntPoly sf = squarefree_part(work);
    std::vector<std::pair<IntPoly, int>> parts;
    if (sf == with_positive_lc(work) || poly_neg(sf) == work || sf == work) {
        parts.emplace_back(sf, 1);
    } else {
        for (const auto& h : factor_squarefree_primitive(sf)) {
            int mult = 0;
            IntPoly cur = work;
            while (auto q = try_div_exact(cur, h)) {
                ++mult;
                cur = *q;
            }
            parts.emplace_back(h, mult);
        }
    }
    // note: primitive_part / factors drop the lc ratio only up to sign, which
    // Mahler measure ignores; the exact |lc(f)| term is already accounted.
    for (const auto& [h, mult] : parts) {
        double val = 0, err = 0;
        certified_roots(h, [&](const std::vector<RootDisk>& disks) {
            return detail::mahler_error_within(disks, eps / (2.0 * parts.size() * mult), &val,
                                               &err);
        });
        out.value += mult * val;
        out.error += mult * err;
    }
    return out;
}

}  // namespace sak
