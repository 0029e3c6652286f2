#pragma once

#include <atomic>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sak/algnum.hpp"
#include "sak/rat_matrix.hpp"

namespace sak {

/// Parametrized rational curve T -> (x_1(T), ..., x_t(T)) in G_m^t, stored
/// against a shared pool of irreducible primitive factors:
///   x_u(T) = c_u * prod_i f_i(T)^{e_{u,i}}.
class RationalCurve {
  public:
    struct Coordinate {
        IntPoly num, den;  // as supplied
    };

    static RationalCurve from_fractions(const std::vector<Coordinate>& coords) {
        RationalCurve c;
        c.coords_ = coords;
        for (size_t u = 0; u < coords.size(); ++u) {
            const std::string where = "/coords/" + std::to_string(u);
            if (coords[u].num.is_zero())
                fail(Module::bhc, ErrorKind::invariant, "coordinate identically zero", where);
            if (coords[u].den.is_zero())
                fail(Module::bhc, ErrorKind::invariant, "zero denominator", where);
        }
        c.constants_.assign(coords.size(), Rat(1));
        c.exponents_.assign(coords.size(), {});
        for (size_t u = 0; u < coords.size(); ++u) {
            auto fn = factor(coords[u].num);
            auto fd = factor(coords[u].den);
            Rat cu(fn.unit * fn.content, fd.unit * fd.content);
            cu.canonicalize();
            c.constants_[u] = cu;
            auto add = [&](const IntPoly& h, int mult) {
                size_t idx = c.pool_index(h);
                auto& e = c.exponents_[u];
                if (e.size() <= idx) e.resize(c.pool_.size(), 0);
                e[idx] += mult;
            };
            for (const auto& [h, m] : fn.factors) add(h, m);
            for (const auto& [h, m] : fd.factors) add(h, -m);
        }
        for (auto& e : c.exponents_) e.resize(c.pool_.size(), 0);
        return c;
    }

    int rank() const { return static_cast<int>(coords_.size()); }
    const std::vector<IntPoly>& factor_pool() const { return pool_; }
    const std::vector<Coordinate>& coordinates() const { return coords_; }
    const Rat& constant(int u) const { return constants_[u]; }
    long exponent(int u, size_t factor_idx) const { return exponents_[u][factor_idx]; }

  private:
    size_t pool_index(const IntPoly& h) {
        for (size_t i = 0; i < pool_.size(); ++i)
            if (pool_[i] == h) return i;
        pool_.push_back(h);
        for (auto& e : exponents_) e.resize(pool_.size(), 0);
        return pool_.size() - 1;
    }

    std::vector<Coordinate> coords_;
    std::vector<IntPoly> pool_;
    std::vector<Rat> constants_;
    std::vector<std::vector<long>> exponents_;
};

/// Basis of the lattice { a : prod x_u(T)^{a_u} is constant }, i.e. the
/// integer kernel of the valuation matrix (rows: pool factors plus the place
/// at infinity; columns: coordinates).
struct RelationLattice {
    std::vector<IntVec> basis;
    bool trivial() const { return basis.empty(); }
};

inline RelationLattice relation_lattice(const RationalCurve& curve) {
    const int t = curve.rank();
    const size_t m = curve.factor_pool().size();
    IntMat val(m + 1, IntVec(t, 0));
    for (int u = 0; u < t; ++u) {
        long inf = 0;
        for (size_t i = 0; i < m; ++i) {
            long e = curve.exponent(u, i);
            val[i][u] = e;
            inf -= e * curve.factor_pool()[i].degree();
        }
        val[m][u] = inf;  // valuation at infinity
    }
    RelationLattice out;
    out.basis = integer_kernel_basis(val);
    // symbolic verification: the factored monomial has zero valuation everywhere
    for (const auto& b : out.basis)
        for (size_t i = 0; i < m; ++i) {
            Int acc(0);
            for (int u = 0; u < t; ++u) acc += b[u] * curve.exponent(u, i);
            if (acc != 0)
                fail(Module::bhc, ErrorKind::domain, "relation lattice verification failed");
        }
    return out;
}

/// One Galois orbit of solutions of prod x_u(T)^{a_u} = 1.
struct IntersectionRecord {
    IntVec a;                       // exponent vector (primitive, sign-normalized)
    IntPoly factor;                 // irreducible defining polynomial of the parameter
    int degree = 0;                 // its degree
    HeightValue point_height;       // sum_u 2 h(x_u(tau))
    HeightValue param_height;       // h(tau)
    std::vector<double> coord_heights;
    bool torsion = false;           // all coordinates are roots of unity
    std::complex<double> tau;       // one representative parameter value
};

inline constexpr int kBhcDegreeCap = 64;

namespace detail {

inline IntPoly coordinate_numerator(const RationalCurve& c, int u) {
    IntPoly num = IntPoly::constant(c.constant(u).get_num());
    for (size_t i = 0; i < c.factor_pool().size(); ++i) {
        long e = c.exponent(u, i);
        if (e > 0) num = poly_mul(num, poly_pow(c.factor_pool()[i], static_cast<int>(e)));
    }
    return num;
}

inline IntPoly coordinate_denominator(const RationalCurve& c, int u) {
    IntPoly den = IntPoly::constant(c.constant(u).get_den());
    for (size_t i = 0; i < c.factor_pool().size(); ++i) {
        long e = c.exponent(u, i);
        if (e < 0) den = poly_mul(den, poly_pow(c.factor_pool()[i], static_cast<int>(-e)));
    }
    return den;
}

// Res_T(h(T), Y den(T) - num(T)) as a polynomial in Y, by exact interpolation.
// For irreducible h it equals (up to content) g^m with g the minimal
// polynomial of num(tau)/den(tau); the Mahler height formula is m-invariant.
inline IntPoly coordinate_value_poly(const IntPoly& h, const IntPoly& num, const IntPoly& den) {
    const int d = h.degree();
    std::vector<long> nodes;
    std::vector<Int> values;
    for (long y = -(d / 2); static_cast<int>(nodes.size()) < d + 1; ++y) {
        IntPoly g = poly_sub(poly_scale(den, Int(y)), num);
        nodes.push_back(y);
        values.push_back(g.is_zero() ? Int(0) : resultant(h, g));
    }
    IntPoly r = interpolate_integer(nodes, values);
    if (r.degree() != d)
        fail(Module::bhc, ErrorKind::domain, "coordinate has a pole on the solution orbit");
    return with_positive_lc(primitive_part(r));
}

}  // namespace detail

struct SubgroupIntersections {
    std::vector<IntersectionRecord> records;
    std::vector<IntVec> skipped;     // degree cap hit
    long degenerate = 0;             // identities holding on the whole curve
};

/// All solutions of prod_u x_u^{a_u} = 1 for ONE primitive exponent vector.
inline void intersect_one(const RationalCurve& curve, const IntVec& a,
                          SubgroupIntersections& out, double eps = 1e-10) {
    const int t = curve.rank();
    // monomial = C prod f_i^{w_i}
    Rat c(1);
    std::vector<long> w(curve.factor_pool().size(), 0);
    long cap_check = 0;
    for (int u = 0; u < t; ++u) {
        long au = a[u].get_si();
        if (au == 0) continue;
        c *= rat_pow(curve.constant(u), au);
        for (size_t i = 0; i < w.size(); ++i) w[i] += au * curve.exponent(u, i);
    }
    for (size_t i = 0; i < w.size(); ++i)
        cap_check += std::abs(w[i]) * curve.factor_pool()[i].degree();
    if (cap_check > kBhcDegreeCap) {
        out.skipped.push_back(a);
        return;
    }
    IntPoly pos = IntPoly::constant(c.get_num());
    IntPoly neg = IntPoly::constant(c.get_den());
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0) pos = poly_mul(pos, poly_pow(curve.factor_pool()[i], static_cast<int>(w[i])));
        if (w[i] < 0) neg = poly_mul(neg, poly_pow(curve.factor_pool()[i], static_cast<int>(-w[i])));
    }
    IntPoly eq = poly_sub(pos, neg);
    if (eq.is_zero()) {
        ++out.degenerate;  // the identity holds on the whole curve
        return;
    }
    if (eq.degree() == 0) return;  // no solutions

    auto fac = factor(eq);
    for (const auto& [h, mult] : fac.factors) {
        (void)mult;
        if (h.degree() == 0) continue;
        bool in_pool = false;
        for (const auto& f : curve.factor_pool())
            if (f == h) { in_pool = true; break; }
        if (in_pool) continue;  // solution leaves the torus (zero/pole coordinate)

        IntersectionRecord rec;
        rec.a = a;
        rec.factor = h;
        rec.degree = h.degree();
        auto mh = mahler_log(h, eps / 4);
        rec.param_height = {mh.value / h.degree(), mh.error / h.degree()};
        rec.torsion = true;
        for (int u = 0; u < t; ++u) {
            IntPoly vp = detail::coordinate_value_poly(h, detail::coordinate_numerator(curve, u),
                                                       detail::coordinate_denominator(curve, u));
            auto hv = mahler_log(vp, eps * vp.degree() / (4.0 * t));
            double hu = std::max(0.0, hv.value / vp.degree());
            rec.coord_heights.push_back(hu);
            rec.point_height.value += 2 * hu;
            rec.point_height.error += 2 * hv.error / vp.degree();
            if (rec.torsion && !is_cyclotomic(squarefree_part(vp))) rec.torsion = false;
        }
        if (rec.torsion) rec.point_height = {0.0, 0.0};  // Kronecker
        rec.tau = isolated_roots(h).front().center;
        out.records.push_back(std::move(rec));
    }
}

/// Enumerates every primitive exponent vector with max-norm <= B up to sign
/// and collects the solution records; s = 1 (curves meeting unions of
/// codimension-1 subgroups) is the implemented case.
inline SubgroupIntersections intersect_with_subgroups(const RationalCurve& curve, int s, long B,
                                                      int threads = 0) {
    if (s != 1) fail(Module::bhc, ErrorKind::invariant, "only s = 1 is implemented");
    if (curve.rank() < 2)
        fail(Module::bhc, ErrorKind::invariant, "need toric rank >= 2 for the curve case");
    if (B < 1) fail(Module::bhc, ErrorKind::invariant, "bound must be >= 1");

    // enumerate primitive vectors, sign-normalized (first nonzero positive)
    std::vector<IntVec> primitives;
    const int t = curve.rank();
    std::vector<long> v(t, -B);
    while (true) {
        long lead = 0;
        Int g(0);
        for (int u = 0; u < t; ++u) {
            if (lead == 0 && v[u] != 0) lead = v[u];
            mpz_gcd_ui(g.get_mpz_t(), g.get_mpz_t(), std::labs(v[u]));
        }
        if (lead > 0 && g == 1) {
            IntVec a(t);
            for (int u = 0; u < t; ++u) a[u] = v[u];
            primitives.push_back(std::move(a));
        }
        int pos = 0;
        while (pos < t && v[pos] == B) v[pos++] = -B;
        if (pos == t) break;
        ++v[pos];
    }

    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* env = std::getenv("SAK_THREADS")) {
            int cap = std::atoi(env);
            if (cap > 0) threads = std::min(threads, cap);
        }
        threads = std::max(1, std::min<int>(threads, 16));
    }

    std::vector<SubgroupIntersections> partial(primitives.size());
    std::atomic<size_t> next(0);
    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= primitives.size()) return;
            intersect_one(curve, primitives[idx], partial[idx]);
        }
    };
    std::vector<std::thread> ts;
    for (int i = 1; i < threads; ++i) ts.emplace_back(worker);
    worker();
    for (auto& th : ts) th.join();

    SubgroupIntersections out;  // deterministic merge in enumeration order
    for (auto& p : partial) {
        for (auto& r : p.records) out.records.push_back(std::move(r));
        for (auto& sk : p.skipped) out.skipped.push_back(std::move(sk));
        out.degenerate += p.degenerate;
    }
    return out;
}

struct BhcReport {
    SubgroupIntersections table;
    HeightValue max_height;
    bool anomalous = false;
    RelationLattice lattice;
};

inline BhcReport bhc_scan(const RationalCurve& curve, long B, int threads = 0) {
    BhcReport out;
    out.lattice = relation_lattice(curve);
    out.anomalous = !out.lattice.trivial();
    out.table = intersect_with_subgroups(curve, 1, B, threads);
    for (const auto& r : out.table.records)
        if (r.point_height.value > out.max_height.value) out.max_height = r.point_height;
    return out;
}

// ---------------------------------------------------------------------------
// CSV export

inline std::string poly_to_string(const IntPoly& p, const std::string& var = "T") {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const Int& c = p.coeff(i);
        if (c == 0) continue;
        Int ac = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        if (i == 0 || ac != 1) os << ac.get_str();
        if (i > 0) {
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

inline std::string bhc_csv(const BhcReport& report) {
    std::ostringstream os;
    os << "a_vector,factor_poly,degree,height,root_of_unity_flag\n";
    for (const auto& r : report.table.records) {
        for (size_t u = 0; u < r.a.size(); ++u) os << (u ? ";" : "") << r.a[u].get_str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12f", r.point_height.value);
        os << "," << poly_to_string(r.factor) << "," << r.degree << "," << buf << ","
           << (r.torsion ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace sak
