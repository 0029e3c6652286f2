#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sak/rat_matrix.hpp"

namespace sak {

/**
 * Finite-dimensional associative Q-algebra given by structure constants:
 * e_i * e_j = sum_k c[i][j][k] e_k, with a distinguished two-sided unit.
 *
 * Associativity on basis triples and the unit laws are checked exhaustively
 * at construction; both are decidable because multiplication is bilinear.
 */
class QAlgebra {
  public:
    QAlgebra(int dim, std::vector<Rat> constants, std::vector<Rat> unit)
        : n_(dim), c_(std::move(constants)), unit_(std::move(unit)) {
        if (n_ < 1) fail(Module::exact_linalg, ErrorKind::invariant, "algebra dim must be >= 1");
        if (c_.size() != static_cast<size_t>(n_) * n_ * n_)
            fail(Module::exact_linalg, ErrorKind::invariant, "structure constant count mismatch");
        if (unit_.size() != static_cast<size_t>(n_))
            fail(Module::exact_linalg, ErrorKind::invariant, "unit vector length mismatch");
        check_axioms();
    }

    int dim() const { return n_; }
    const Rat& c(int i, int j, int k) const {
        return c_[(static_cast<size_t>(i) * n_ + j) * n_ + k];
    }
    const std::vector<Rat>& unit_coords() const { return unit_; }

    bool same_structure(const QAlgebra& o) const {
        return n_ == o.n_ && c_ == o.c_ && unit_ == o.unit_;
    }

    std::vector<Rat> mul_coords(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        std::vector<Rat> out(n_, Rat(0));
        for (int i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < n_; ++j) {
                if (b[j] == 0) continue;
                Rat f = a[i] * b[j];
                for (int k = 0; k < n_; ++k) {
                    const Rat& s = c(i, j, k);
                    if (s != 0) out[k] += f * s;
                }
            }
        }
        return out;
    }

    // --- ready-made presentations used by tests and the CLI ---

    static std::shared_ptr<const QAlgebra> rationals() {
        return std::make_shared<QAlgebra>(1, std::vector<Rat>{Rat(1)}, std::vector<Rat>{Rat(1)});
    }

    // basis {1, w} with w^2 = d (d = -1 gives Q(i))
    static std::shared_ptr<const QAlgebra> quadratic_field(const Rat& d) {
        std::vector<Rat> c(8, Rat(0));
        auto at = [&](int i, int j, int k) -> Rat& { return c[(i * 2 + j) * 2 + k]; };
        at(0, 0, 0) = 1;
        at(0, 1, 1) = 1;
        at(1, 0, 1) = 1;
        at(1, 1, 0) = d;
        return std::make_shared<QAlgebra>(2, std::move(c), std::vector<Rat>{Rat(1), Rat(0)});
    }

    // 2x2 rational matrices, basis {E11, E12, E21, E22}
    static std::shared_ptr<const QAlgebra> matrix_algebra_2x2() {
        std::vector<Rat> c(64, Rat(0));
        auto at = [&](int i, int j, int k) -> Rat& { return c[(i * 4 + j) * 4 + k]; };
        auto idx = [](int r, int s) { return r * 2 + s; };  // E_{r,s}
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v)
                        if (s == u) at(idx(r, s), idx(u, v), idx(r, v)) = 1;
        return std::make_shared<QAlgebra>(4, std::move(c),
                                          std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(1)});
    }

    // quaternion-type algebra (a,b|Q): i^2 = a, j^2 = b, ij = k = -ji
    static std::shared_ptr<const QAlgebra> quaternion_algebra(const Rat& a, const Rat& b) {
        std::vector<Rat> c(64, Rat(0));
        auto at = [&](int i, int j, int k) -> Rat& { return c[(i * 4 + j) * 4 + k]; };
        // basis order {1, i, j, k}
        at(0, 0, 0) = 1; at(0, 1, 1) = 1; at(0, 2, 2) = 1; at(0, 3, 3) = 1;
        at(1, 0, 1) = 1; at(2, 0, 2) = 1; at(3, 0, 3) = 1;
        at(1, 1, 0) = a;
        at(2, 2, 0) = b;
        at(3, 3, 0) = -a * b;
        at(1, 2, 3) = 1;  at(2, 1, 3) = -1;   // ij = k, ji = -k
        at(1, 3, 2) = a;  at(3, 1, 2) = -a;   // ik = aj, ki = -aj
        at(2, 3, 1) = -b; at(3, 2, 1) = b;    // jk = -bi, kj = bi
        return std::make_shared<QAlgebra>(4, std::move(c),
                                          std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0)});
    }

    // direct sum Q x Q (not a division algebra; exercises the divisibility error)
    static std::shared_ptr<const QAlgebra> split_pair() {
        std::vector<Rat> c(8, Rat(0));
        auto at = [&](int i, int j, int k) -> Rat& { return c[(i * 2 + j) * 2 + k]; };
        at(0, 0, 0) = 1;
        at(1, 1, 1) = 1;
        return std::make_shared<QAlgebra>(2, std::move(c), std::vector<Rat>{Rat(1), Rat(1)});
    }

  private:
    void check_axioms() const {
        std::vector<Rat> ei(n_), ej(n_), ek(n_);
        for (int i = 0; i < n_; ++i) {
            std::fill(ei.begin(), ei.end(), Rat(0));
            ei[i] = 1;
            if (mul_coords(unit_, ei) != ei || mul_coords(ei, unit_) != ei)
                fail(Module::exact_linalg, ErrorKind::invariant, "unit law fails on basis element",
                     "/unit");
        }
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) {
                    std::fill(ei.begin(), ei.end(), Rat(0)); ei[i] = 1;
                    std::fill(ej.begin(), ej.end(), Rat(0)); ej[j] = 1;
                    std::fill(ek.begin(), ek.end(), Rat(0)); ek[k] = 1;
                    if (mul_coords(mul_coords(ei, ej), ek) != mul_coords(ei, mul_coords(ej, ek)))
                        fail(Module::exact_linalg, ErrorKind::invariant,
                             "structure constants are not associative",
                             "/constants/" + std::to_string(i) + "/" + std::to_string(j) + "/" +
                                 std::to_string(k));
                }
    }

    int n_;
    std::vector<Rat> c_;
    std::vector<Rat> unit_;
};

using AlgebraPtr = std::shared_ptr<const QAlgebra>;

/// Element of a QAlgebra: coefficient vector in the declared basis.
struct AlgebraElement {
    AlgebraPtr algebra;
    std::vector<Rat> coords;

    AlgebraElement() = default;
    AlgebraElement(AlgebraPtr a, std::vector<Rat> v) : algebra(std::move(a)), coords(std::move(v)) {
        if (!algebra || coords.size() != static_cast<size_t>(algebra->dim()))
            fail(Module::exact_linalg, ErrorKind::invariant, "element length != algebra dim");
    }
    static AlgebraElement zero(const AlgebraPtr& a) {
        return AlgebraElement(a, std::vector<Rat>(a->dim(), Rat(0)));
    }
    static AlgebraElement unit(const AlgebraPtr& a) { return AlgebraElement(a, a->unit_coords()); }
    static AlgebraElement basis(const AlgebraPtr& a, int i) {
        std::vector<Rat> v(a->dim(), Rat(0));
        v[i] = 1;
        return AlgebraElement(a, std::move(v));
    }

    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](const Rat& r) { return r == 0; });
    }
    bool operator==(const AlgebraElement& o) const { return coords == o.coords; }
};

inline void require_same_algebra(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.algebra.get() == b.algebra.get()) return;
    if (a.algebra && b.algebra && a.algebra->same_structure(*b.algebra)) return;
    fail(Module::exact_linalg, ErrorKind::invariant, "elements of mismatched algebras");
}

inline AlgebraElement algebra_mul(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a, b);
    return AlgebraElement(a.algebra, a.algebra->mul_coords(a.coords, b.coords));
}

inline AlgebraElement algebra_add(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a, b);
    std::vector<Rat> v(a.coords);
    for (size_t i = 0; i < v.size(); ++i) v[i] += b.coords[i];
    return AlgebraElement(a.algebra, std::move(v));
}

inline AlgebraElement algebra_scale(const Rat& q, const AlgebraElement& a) {
    std::vector<Rat> v(a.coords);
    for (auto& x : v) x *= q;
    return AlgebraElement(a.algebra, std::move(v));
}

/// Dense matrix over a QAlgebra.
struct DMat {
    AlgebraPtr algebra;
    int rows = 0, cols = 0;
    std::vector<AlgebraElement> a;

    DMat() = default;
    DMat(AlgebraPtr alg, int r, int c)
        : algebra(std::move(alg)), rows(r), cols(c),
          a(static_cast<size_t>(r) * c, AlgebraElement::zero(algebra)) {}

    AlgebraElement& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const AlgebraElement& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static DMat identity(const AlgebraPtr& alg, int n) {
        DMat m(alg, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = AlgebraElement::unit(alg);
        return m;
    }
};

/// Left regular representation: the n x n matrix l(d) with
/// l(d) . coords(x) = coords(d x) for all x.
inline RatMatrix regular_representation(const AlgebraPtr& a, const AlgebraElement& d) {
    if (!d.algebra->same_structure(*a))
        fail(Module::exact_linalg, ErrorKind::invariant, "element not in the given algebra");
    const int n = a->dim();
    RatMatrix m(n, n);
    for (int j = 0; j < n; ++j) {
        auto col = a->mul_coords(d.coords, AlgebraElement::basis(a, j).coords);
        for (int i = 0; i < n; ++i) m(i, j) = col[i];
    }
    return m;
}

/// Dimension over D of the D-span of vectors in D^r, computed as the Q-rank
/// of the stacked regular-representation images divided by dim(D).  The
/// caller asserts D is a division algebra; a non-divisible Q-rank reports
/// that the assertion failed.
inline int d_span_rank(const AlgebraPtr& a, const std::vector<std::vector<AlgebraElement>>& vectors) {
    const int n = a->dim();
    if (vectors.empty()) return 0;
    const int r = static_cast<int>(vectors[0].size());
    RatMatrix stacked(n * r, n * static_cast<int>(vectors.size()));
    for (size_t v = 0; v < vectors.size(); ++v) {
        if (static_cast<int>(vectors[v].size()) != r)
            fail(Module::exact_linalg, ErrorKind::invariant, "ragged vector list");
        for (int i = 0; i < r; ++i) {
            RatMatrix li = regular_representation(a, vectors[v][i]);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    stacked(i * n + p, static_cast<int>(v) * n + q) = li(p, q);
        }
    }
    int qrank = rank(stacked);
    if (qrank % n != 0)
        fail(Module::exact_linalg, ErrorKind::domain,
             "Q-rank not divisible by dim(D): division-algebra assertion failed");
    return qrank / n;
}

}  // namespace sak
