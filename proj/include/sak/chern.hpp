#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "sak/error.hpp"

namespace sak {

using CD = std::complex<double>;

/// Point of T(C) = (C*)^t.
struct TorusPointC {
    std::vector<CD> z;
    void validate() const {
        for (size_t u = 0; u < z.size(); ++u)
            if (std::abs(z[u]) == 0.0)
                fail(Module::chern, ErrorKind::invariant, "torus coordinate is zero",
                     "/z/" + std::to_string(u));
    }
};

/// Real symmetric matrix of g_omega at a point, on the interleaved real basis
/// (x_1, y_1, x_2, y_2, ...) of C^d; the complex structure maps
/// dx_k -> dy_k -> -dx_k.
struct FormMatrix {
    int complex_dim = 0;
    std::vector<double> m;  // (2d)^2 row-major

    explicit FormMatrix(int d = 0) : complex_dim(d), m(4 * static_cast<size_t>(d) * d, 0.0) {}
    int n() const { return 2 * complex_dim; }
    double& at(int p, int q) { return m[static_cast<size_t>(p) * n() + q]; }
    double at(int p, int q) const { return m[static_cast<size_t>(p) * n() + q]; }

    double max_asymmetry() const {
        double out = 0;
        for (int p = 0; p < n(); ++p)
            for (int q = p + 1; q < n(); ++q) out = std::max(out, std::abs(at(p, q) - at(q, p)));
        return out;
    }

    // g(I v, I w) for basis vectors: I e_{2k} = e_{2k+1}, I e_{2k+1} = -e_{2k}
    double i_compat_defect() const {
        auto iv = [&](int p, double& sign) {
            sign = (p % 2 == 0) ? 1.0 : -1.0;
            return (p % 2 == 0) ? p + 1 : p - 1;
        };
        double out = 0;
        for (int p = 0; p < n(); ++p)
            for (int q = 0; q < n(); ++q) {
                double sp, sq;
                int ip = iv(p, sp), iq = iv(q, sq);
                out = std::max(out, std::abs(sp * sq * at(ip, iq) - at(p, q)));
            }
        return out;
    }
};

/// Jacobi eigenvalues of a small symmetric matrix, ascending.
inline std::vector<double> symmetric_eigenvalues(FormMatrix a) {
    const int n = a.n();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a.at(q, q) - a.at(p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// ---------------------------------------------------------------------------
// toric (1,1)-forms
//
// omega(phi_tor) = sum_v [ dd^c log(1+e^{2 f_v}) + dd^c log(1+e^{-2 f_v}) ],
// f_v = sum_u a_uv lambda_u, lambda_u = -log|z_u|.  The normalization is the
// Chern form of the squared metric norm, so that integrals over the
// compactified model equal the intersection degrees of the associated
// divisor classes.  In tensor form
//   g_omega = sum_v (8 / (pi Q_v)) Re( del f_v (x) conj(del f_v) ),
//   Q_v = (1 + e^{2 f_v})(1 + e^{-2 f_v}) = 4 cosh^2 f_v,
// with del f_v = -sum_u a_uv dz_u / (2 z_u).

using RealMat = std::vector<std::vector<double>>;  // a[v][u], t' rows, t cols

namespace detail {

inline double inv_q(double f) {
    // 1 / (4 cosh^2 f), stable for large |f|
    double e = std::exp(-2 * std::abs(f));
    double s = 1 + e;
    return e / (s * s);
}

}  // namespace detail

inline FormMatrix toric_form_matrix(const RealMat& phi_tor, const TorusPointC& pt) {
    pt.validate();
    const int t = static_cast<int>(pt.z.size());
    const int tp = static_cast<int>(phi_tor.size());
    for (const auto& row : phi_tor)
        if (static_cast<int>(row.size()) != t)
            fail(Module::chern, ErrorKind::invariant, "phi_tor width != t");
    FormMatrix g(t);
    std::vector<double> lambda(t);
    for (int u = 0; u < t; ++u) lambda[u] = -std::log(std::abs(pt.z[u]));
    for (int v = 0; v < tp; ++v) {
        double f = 0;
        for (int u = 0; u < t; ++u) f += phi_tor[v][u] * lambda[u];
        double w = 8.0 / M_PI * detail::inv_q(f);
        // L(d/dx_u) = -a_uv / (2 z_u), L(d/dy_u) = -i a_uv / (2 z_u)
        std::vector<CD> l(2 * t);
        for (int u = 0; u < t; ++u) {
            CD base = -phi_tor[v][u] / (2.0 * pt.z[u]);
            l[2 * u] = base;
            l[2 * u + 1] = CD(0, 1) * base;
        }
        for (int p = 0; p < 2 * t; ++p)
            for (int q = 0; q < 2 * t; ++q) g.at(p, q) += w * std::real(l[p] * std::conj(l[q]));
    }
    return g;
}

// ---------------------------------------------------------------------------
// abelian (1,1)-forms

using CMat = std::vector<std::vector<CD>>;

/// Flat model of the abelian side: complex dimension, hermitian Gram of the
/// target polarization (g' x g'), the complex lift of phi_ab (g' x g), and a
/// lattice parameter for the fundamental domain (g = 1 case).
struct FlatAbelianData {
    int g = 0;
    CMat hermitian;  // H, g' x g', positive definite hermitian
    CMat lift;       // g' x g
    CD tau{0.0, 1.0};

    int g_prime() const { return static_cast<int>(hermitian.size()); }

    void validate() const {
        if (g < 0) fail(Module::chern, ErrorKind::invariant, "negative dimension");
        const int gp = g_prime();
        for (const auto& row : hermitian)
            if (static_cast<int>(row.size()) != gp)
                fail(Module::chern, ErrorKind::invariant, "H not square");
        for (int j = 0; j < gp; ++j)
            for (int k = 0; k < gp; ++k)
                if (std::abs(hermitian[j][k] - std::conj(hermitian[k][j])) > 1e-12)
                    fail(Module::chern, ErrorKind::invariant, "H is not hermitian", "/H");
        if (static_cast<int>(lift.size()) != gp)
            fail(Module::chern, ErrorKind::invariant, "lift row count != g'");
        for (const auto& row : lift)
            if (static_cast<int>(row.size()) != g)
                fail(Module::chern, ErrorKind::invariant, "lift column count != g");
        if (g == 1 && tau.imag() <= 0)
            fail(Module::chern, ErrorKind::invariant, "lattice parameter needs Im tau > 0");
    }

    CD h_form(const std::vector<CD>& v, const std::vector<CD>& w) const {
        CD acc = 0;
        for (int j = 0; j < g_prime(); ++j)
            for (int k = 0; k < g_prime(); ++k) acc += hermitian[j][k] * v[j] * std::conj(w[k]);
        return acc;
    }

    std::vector<CD> apply_lift(const std::vector<CD>& v) const {
        std::vector<CD> out(g_prime(), CD(0, 0));
        for (int j = 0; j < g_prime(); ++j)
            for (int k = 0; k < g; ++k) out[j] += lift[j][k] * v[k];
        return out;
    }
};

/// Constant-coefficient form g(v, w) = Re H(lift v, lift w) on the real
/// coordinates of C^g.
inline FormMatrix abelian_form_matrix(const FlatAbelianData& data) {
    data.validate();
    FormMatrix g(data.g);
    auto basis_vec = [&](int p) {
        std::vector<CD> v(data.g, CD(0, 0));
        v[p / 2] = (p % 2 == 0) ? CD(1, 0) : CD(0, 1);
        return data.apply_lift(v);
    };
    std::vector<std::vector<CD>> lifted(2 * data.g);
    for (int p = 0; p < 2 * data.g; ++p) lifted[p] = basis_vec(p);
    for (int p = 0; p < 2 * data.g; ++p)
        for (int q = 0; q < 2 * data.g; ++q)
            g.at(p, q) = std::real(data.h_form(lifted[p], lifted[q]));
    return g;
}

/// c . g_toric (+) g_abelian on the combined model T x A.
inline FormMatrix combined_form_matrix(double c, const FormMatrix& toric,
                                       const FormMatrix& abelian) {
    FormMatrix g(toric.complex_dim + abelian.complex_dim);
    for (int p = 0; p < toric.n(); ++p)
        for (int q = 0; q < toric.n(); ++q) g.at(p, q) = c * toric.at(p, q);
    for (int p = 0; p < abelian.n(); ++p)
        for (int q = 0; q < abelian.n(); ++q)
            g.at(toric.n() + p, toric.n() + q) = abelian.at(p, q);
    return g;
}

/// Complex dimension of ker(g_omega): eigenvalues below tol, halved; the
/// kernel is I-invariant, so an odd count signals a tolerance failure.
inline int kernel_rank(const FormMatrix& form, double tol = 1e-8) {
    if (form.max_asymmetry() > 1e-12)
        fail(Module::chern, ErrorKind::invariant, "form matrix not symmetric");
    auto ev = symmetric_eigenvalues(form);
    if (!ev.empty() && ev.front() < -tol)
        fail(Module::chern, ErrorKind::invariant, "form matrix not semipositive");
    int small = 0;
    for (double e : ev)
        if (e < tol) ++small;
    if (small % 2 != 0)
        fail(Module::chern, ErrorKind::domain,
             "odd small-eigenvalue count: eigenvalue tolerance failure");
    return small / 2;
}

// ---------------------------------------------------------------------------
// quadrature of top powers

struct QuadratureParams {
    double rel_tol = 1e-4;
    double abs_tol = 1e-7;
    int base_n = 8;
    int max_levels = 10;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int grid_levels = 0;
    bool converged = false;
};

namespace detail {

// Pfaffian of a small antisymmetric matrix (recursive expansion).
inline double pfaffian(std::vector<std::vector<double>> a) {
    const size_t n = a.size();
    if (n == 0) return 1.0;
    if (n % 2 == 1) return 0.0;
    if (n == 2) return a[0][1];
    double out = 0;
    double sign = 1;
    for (size_t j = 1; j < n; ++j) {
        std::vector<std::vector<double>> sub;
        for (size_t r = 1; r < n; ++r) {
            if (r == j) continue;
            std::vector<double> row;
            for (size_t c = 1; c < n; ++c) {
                if (c == j) continue;
                row.push_back(a[r][c]);
            }
            sub.push_back(std::move(row));
        }
        out += sign * a[0][j] * pfaffian(std::move(sub));
        sign = -sign;
    }
    return out;
}

// Pf of the toric 2-form in the (lambda_1..lambda_t, theta_1..theta_t) frame.
inline double toric_pf(const RealMat& a, const std::vector<double>& lambda) {
    const int t = static_cast<int>(lambda.size());
    const int tp = static_cast<int>(a.size());
    std::vector<std::vector<double>> omega(2 * t, std::vector<double>(2 * t, 0.0));
    for (int v = 0; v < tp; ++v) {
        double f = 0;
        for (int u = 0; u < t; ++u) f += a[v][u] * lambda[u];
        double c = 4.0 / M_PI * inv_q(f);  // 4 / (pi Q), Q = 4 cosh^2 f
        for (int u = 0; u < t; ++u)
            for (int up = 0; up < t; ++up) {
                double w = -0.5 * c * a[v][u] * a[v][up];
                omega[u][t + up] += w;
                omega[t + up][u] -= w;
            }
    }
    return pfaffian(std::move(omega));
}

// Pf of the abelian form on the lattice frame (1, tau) for g <= 1.
inline double abelian_pf(const FlatAbelianData& data) {
    if (data.g == 0) return 1.0;
    std::vector<CD> e1{CD(1, 0)}, e2{data.tau};
    CD h = data.h_form(data.apply_lift(e1), data.apply_lift(e2));
    return -std::imag(h);  // omega = -Im H
}

}  // namespace detail

/// Numerical integral of (c omega(phi_tor))^{s1} ^ (pi^* omega(N;phi_ab))^{s2}
/// over T(C) x (C^g / lattice), toric directions compactified by u = tanh
/// lambda.  On the product model the integrand vanishes identically unless
/// (s1, s2) = (t, g); the nontrivial case is evaluated by a midpoint tensor
/// grid with Richardson extrapolation, doubling until stable.
inline QuadratureResult integrate_top_power(const RealMat& phi_tor, int t,
                                            const FlatAbelianData* abelian, double c_weight,
                                            int s1, int s2,
                                            const QuadratureParams& params = {}) {
    const int g = abelian ? abelian->g : 0;
    if (t < 0 || t > 2 || g > 1)
        fail(Module::chern, ErrorKind::invariant, "desk-scale caps: t <= 2, g <= 1");
    if (s1 < 0 || s2 < 0 || s1 + s2 != t + g)
        fail(Module::chern, ErrorKind::invariant, "s1 + s2 must equal the model dimension");
    for (const auto& row : phi_tor)
        if (static_cast<int>(row.size()) != t)
            fail(Module::chern, ErrorKind::invariant, "phi_tor width != t");
    if (abelian) abelian->validate();

    QuadratureResult out;
    if (s1 != t || s2 != g) {
        out.converged = true;
        return out;  // the mixed power has no volume contribution on the product model
    }

    double t_factorial = 1;
    for (int i = 2; i <= t; ++i) t_factorial *= i;
    // (lambda, theta) charts are negatively oriented, and the working frame
    // (lambda_1..lambda_t, theta_1..theta_t) differs from the oriented
    // interleaved frame by a riffle permutation of sign (-1)^{t(t-1)/2}
    double sign = ((t + t * (t - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    double ab = abelian ? detail::abelian_pf(*abelian) : 1.0;
    double prefactor = sign * t_factorial * std::pow(2 * M_PI, t) * std::pow(c_weight, t) * ab;

    if (t == 0) {
        out.value = prefactor;
        out.converged = true;
        return out;
    }

    auto grid_estimate = [&](long n) {
        // composite midpoint over u in (-1,1)^t
        double h = 2.0 / n;
        double acc = 0;
        std::vector<long> idx(t, 0);
        std::vector<double> lambda(t);
        while (true) {
            bool ok = true;
            for (int k = 0; k < t; ++k) {
                double u = -1 + (idx[k] + 0.5) * h;
                lambda[k] = std::atanh(u);
                if (!std::isfinite(lambda[k])) ok = false;
            }
            if (ok) {
                double jac = 1;
                for (int k = 0; k < t; ++k) {
                    double u = -1 + (idx[k] + 0.5) * h;
                    jac /= (1 - u * u);
                }
                acc += detail::toric_pf(phi_tor, lambda) * jac;
            }
            int pos = 0;
            while (pos < t && ++idx[pos] == n) idx[pos++] = 0;
            if (pos == t) break;
        }
        return acc * std::pow(h, t);
    };

    long n = params.base_n;
    double prev_plain = grid_estimate(n);
    double prev_rich = prev_plain;
    bool have_rich = false;
    for (int level = 1; level <= params.max_levels; ++level) {
        n *= 2;
        double cur_plain = grid_estimate(n);
        double rich = (4 * cur_plain - prev_plain) / 3;
        out.grid_levels = level;
        if (have_rich) {
            double diff = std::abs(rich - prev_rich);
            out.value = prefactor * rich;
            out.error_estimate = std::abs(prefactor) * diff + 1e-12 * std::abs(out.value);
            if (diff <= std::max(params.abs_tol, params.rel_tol * std::abs(rich))) {
                out.converged = true;
                return out;
            }
        }
        prev_plain = cur_plain;
        prev_rich = rich;
        have_rich = true;
    }
    fail(Module::chern, ErrorKind::domain, "quadrature did not converge");
}

}  // namespace sak
