#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "sak/rational.hpp"

namespace sak {

/// Dense matrix of exact rationals.  Entries are always kept canonical
/// (gmp canonicalizes on assignment); dimensions are positive.
class RatMatrix {
  public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(int rows, int cols, Rat fill = Rat(0))
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            fail(Module::exact_linalg, ErrorKind::invariant, "negative matrix dimension");
    }
    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rat& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_)
            fail(Module::exact_linalg, ErrorKind::invariant, "matrix product shape mismatch");
        RatMatrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rat& x = (*this)(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j) out(i, j) += x * o(k, j);
            }
        return out;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            fail(Module::exact_linalg, ErrorKind::invariant, "matrix-vector shape mismatch");
        std::vector<Rat> out(rows_, Rat(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    RatMatrix scaled(const Rat& c) const {
        RatMatrix out = *this;
        for (auto& x : out.a_) x *= c;
        return out;
    }

    RatMatrix transposed() const {
        RatMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Int denominator_lcm() const {
        Int d = 1;
        for (const auto& x : a_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
        return d;
    }

    Rat max_abs_entry() const {
        Rat m(0);
        for (const auto& x : a_) m = std::max(m, rat_abs(x));
        return m;
    }

  private:
    int rows_, cols_;
    std::vector<Rat> a_;
};

namespace detail {

// In-place reduced row echelon form; returns pivot column indices.
inline std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m(i, col) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rat inv = 1 / m(row, col);
        for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rat f = m(i, col);
            for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

inline int rank(RatMatrix m) { return static_cast<int>(detail::rref(m).size()); }

// Solves M x = y; empty optional when inconsistent.
inline std::optional<std::vector<Rat>> solve(const RatMatrix& m, const std::vector<Rat>& y) {
    if (static_cast<int>(y.size()) != m.rows())
        fail(Module::exact_linalg, ErrorKind::invariant, "rhs length mismatch");
    RatMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = y[i];
    }
    auto pivots = detail::rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    std::vector<Rat> x(m.cols(), Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<int>(r), m.cols());
    return x;
}

// Basis of the right kernel {x : M x = 0}.
inline std::vector<std::vector<Rat>> kernel_basis(RatMatrix m) {
    auto pivots = detail::rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(m.cols(), Rat(0));
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Result of an image-membership query.  `certificate` is the column subset I
/// with wedge(I) != 0 and wedge(I) ^ y = 0; it is produced only for matrices
/// with at most `kWedgeColumnCap` columns (combinatorial blow-up beyond that),
/// and only when the answer is positive.
struct ImageMembership {
    bool member = false;
    std::optional<std::vector<Rat>> solution;       // x with M x = y, when member
    std::optional<std::vector<int>> certificate;    // wedge-route subset I
};

inline constexpr int kWedgeColumnCap = 6;

namespace detail {

inline Rat minor_det(const RatMatrix& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
    const int n = static_cast<int>(rows.size());
    RatMatrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = m(rows[i], cols[j]);
    // elimination determinant
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (s(i, c) != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(s(p, j), s(c, j));
            det = -det;
        }
        det *= s(c, c);
        Rat inv = 1 / s(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (s(i, c) == 0) continue;
            Rat f = s(i, c) * inv;
            for (int j = c; j < n; ++j) s(i, j) -= f * s(c, j);
        }
    }
    return det;
}

// All k-subsets of {0..n-1} in lexicographic order.
inline void for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& f) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) { f(idx); return; }
    if (k > n) return;
    while (true) {
        if (f(idx)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// wedge of the selected columns is nonzero <=> some |I|x|I| row-minor is nonzero
inline bool wedge_nonzero(const RatMatrix& m, const std::vector<int>& cols) {
    bool found = false;
    for_each_subset(m.rows(), static_cast<int>(cols.size()),
                    [&](const std::vector<int>& rows) {
                        if (minor_det(m, rows, cols) != 0) { found = true; return true; }
                        return false;
                    });
    return found;
}

// wedge(cols) ^ y vanishes <=> every (|I|+1)-minor of [M_I | y] vanishes
inline bool wedge_with_vector_zero(const RatMatrix& m, const std::vector<int>& cols,
                                   const std::vector<Rat>& y) {
    const int k = static_cast<int>(cols.size());
    RatMatrix ext(m.rows(), k + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < k; ++j) ext(i, j) = m(i, cols[j]);
        ext(i, k) = y[i];
    }
    std::vector<int> all_cols(k + 1);
    for (int j = 0; j <= k; ++j) all_cols[j] = j;
    bool ok = true;
    for_each_subset(m.rows(), k + 1, [&](const std::vector<int>& rows) {
        if (minor_det(ext, rows, all_cols) != 0) { ok = false; return true; }
        return false;
    });
    return ok;
}

}  // namespace detail

/// y in column span of M?  Decision by Gaussian elimination; the wedge
/// certificate (subset I with nonzero wedge annihilating y) is attached for
/// small column counts when `want_certificate`.
inline ImageMembership image_membership(const RatMatrix& m, const std::vector<Rat>& y,
                                        bool want_certificate = true) {
    ImageMembership out;
    out.solution = solve(m, y);
    out.member = out.solution.has_value();
    if (!out.member || !want_certificate || m.cols() > kWedgeColumnCap) return out;

    bool y_zero = std::all_of(y.begin(), y.end(), [](const Rat& r) { return r == 0; });
    for (int k = y_zero ? 0 : 1; k <= m.cols() && !out.certificate; ++k) {
        detail::for_each_subset(m.cols(), k, [&](const std::vector<int>& cols) {
            if ((k == 0 || detail::wedge_nonzero(m, cols)) &&
                detail::wedge_with_vector_zero(m, cols, y)) {
                out.certificate = cols;
                return true;
            }
            return false;
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integer lattice kernels.

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row-major

/// Primitive basis of {x in Z^q : M x = 0} via unimodular column reduction.
/// The returned vectors form a basis of the (saturated) kernel lattice,
/// sign-normalized so the first nonzero entry is positive, sorted.
inline std::vector<IntVec> integer_kernel_basis(const IntMat& m_in) {
    if (m_in.empty()) return {};
    const int p = static_cast<int>(m_in.size());
    const int q = static_cast<int>(m_in[0].size());
    IntMat m = m_in;
    IntMat v(q, IntVec(q, 0));
    for (int j = 0; j < q; ++j) v[j][j] = 1;

    auto add_col = [&](int dst, int src, const Int& f) {
        for (int i = 0; i < p; ++i) m[i][dst] += f * m[i][src];
        for (int i = 0; i < q; ++i) v[i][dst] += f * v[i][src];
    };
    auto swap_col = [&](int a, int b) {
        for (int i = 0; i < p; ++i) std::swap(m[i][a], m[i][b]);
        for (int i = 0; i < q; ++i) std::swap(v[i][a], v[i][b]);
    };

    int fixed = 0;  // columns [0, fixed) hold processed pivots
    for (int row = 0; row < p && fixed < q; ++row) {
        while (true) {
            int best = -1;
            for (int j = fixed; j < q; ++j) {
                if (m[row][j] == 0) continue;
                if (best < 0 || mpz_cmpabs(m[row][j].get_mpz_t(), m[row][best].get_mpz_t()) < 0)
                    best = j;
            }
            if (best < 0) break;  // row already zero on active columns
            int nonzero = 0;
            for (int j = fixed; j < q; ++j)
                if (m[row][j] != 0) ++nonzero;
            if (nonzero == 1) {
                swap_col(fixed, best);
                ++fixed;
                break;
            }
            for (int j = fixed; j < q; ++j) {
                if (j == best || m[row][j] == 0) continue;
                Int f;
                mpz_fdiv_q(f.get_mpz_t(), m[row][j].get_mpz_t(), m[row][best].get_mpz_t());
                add_col(j, best, -f);
            }
        }
    }

    std::vector<IntVec> basis;
    for (int j = fixed; j < q; ++j) {
        IntVec col(q);
        for (int i = 0; i < q; ++i) col[i] = v[i][j];
        int lead = -1;
        for (int i = 0; i < q; ++i)
            if (col[i] != 0) { lead = i; break; }
        if (lead >= 0 && col[lead] < 0)
            for (auto& x : col) x = -x;
        basis.push_back(std::move(col));
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

}  // namespace sak
