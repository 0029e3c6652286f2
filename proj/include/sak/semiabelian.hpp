#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sak/qalgebra.hpp"

namespace sak {

/// One isotypic factor B^r of the abelian part, together with the data of the
/// dual-side module Gamma: its endomorphism algebra D, a free basis
/// gamma_1..gamma_l, and an exponent annihilating the torsion of Gamma.
struct IsotypicBlock {
    AlgebraPtr algebra;     // D
    int gamma_rank = 0;     // l
    Int torsion_exponent{1};
    int r = 1;              // multiplicity of the simple factor in A
    int r_prime = 0;        // multiplicity in A'

    void validate(const std::string& where) const {
        if (!algebra) fail(Module::semiabelian, ErrorKind::invariant, "missing algebra", where);
        if (gamma_rank < 0) fail(Module::semiabelian, ErrorKind::invariant, "l < 0", where);
        if (torsion_exponent < 1)
            fail(Module::semiabelian, ErrorKind::invariant, "torsion exponent < 1", where);
        if (r < 1) fail(Module::semiabelian, ErrorKind::invariant, "r < 1", where);
        if (r_prime < 0) fail(Module::semiabelian, ErrorKind::invariant, "r_prime < 0", where);
    }
};

/// Coefficients of one block of an Ext class matrix: the expansion
/// [eta_ij] = sum_k c[i][j][k] [gamma_k], i < rows, j < cols, k < l.
struct ExtBlock {
    AlgebraPtr algebra;
    int rows = 0, cols = 0, l = 0;
    std::vector<AlgebraElement> coeff;  // rows*cols*l, row-major

    ExtBlock() = default;
    ExtBlock(const AlgebraPtr& a, int rows_, int cols_, int l_)
        : algebra(a), rows(rows_), cols(cols_), l(l_),
          coeff(static_cast<size_t>(rows_) * cols_ * l_, AlgebraElement::zero(a)) {}

    AlgebraElement& at(int i, int j, int k) {
        return coeff[(static_cast<size_t>(i) * cols + j) * l + k];
    }
    const AlgebraElement& at(int i, int j, int k) const {
        return coeff[(static_cast<size_t>(i) * cols + j) * l + k];
    }
    bool operator==(const ExtBlock& o) const {
        return rows == o.rows && cols == o.cols && l == o.l && coeff == o.coeff;
    }
};

/// eta_G as a matrix of dual-group elements over the isotypic blocks.
struct ExtClassMatrix {
    std::vector<ExtBlock> blocks;
    bool operator==(const ExtClassMatrix& o) const { return blocks == o.blocks; }
};

struct SemiabelianDescriptor {
    int toric_rank = 0;
    std::vector<IsotypicBlock> blocks;
    ExtClassMatrix eta;

    void validate() const {
        if (toric_rank < 0)
            fail(Module::semiabelian, ErrorKind::invariant, "toric rank < 0", "/t");
        if (eta.blocks.size() != blocks.size())
            fail(Module::semiabelian, ErrorKind::invariant, "eta block count mismatch", "/eta");
        for (size_t b = 0; b < blocks.size(); ++b) {
            const std::string where = "/blocks/" + std::to_string(b);
            blocks[b].validate(where);
            const ExtBlock& e = eta.blocks[b];
            if (e.rows != blocks[b].r || e.cols != toric_rank || e.l != blocks[b].gamma_rank)
                fail(Module::semiabelian, ErrorKind::invariant, "eta dimension mismatch",
                     "/eta/" + std::to_string(b));
            if (!e.algebra || !e.algebra->same_structure(*blocks[b].algebra))
                fail(Module::semiabelian, ErrorKind::invariant,
                     "eta block algebra mismatch", "/eta/" + std::to_string(b));
            for (const auto& x : e.coeff)
                if (!x.algebra || !x.algebra->same_structure(*blocks[b].algebra))
                    fail(Module::semiabelian, ErrorKind::invariant,
                         "eta coefficient in wrong algebra", "/eta/" + std::to_string(b));
        }
    }
};

/// Candidate (quasi-)homomorphism: rational toric matrix (t' x t) plus one
/// matrix over D per block (r' x r), with the least denominator n making both
/// integral.
struct HomPair {
    RatMatrix phi_tor;          // t' x t
    std::vector<DMat> phi_ab;   // per block, r' x r over the block algebra
    Int denominator{1};

    void validate() const {
        if (denominator < 1)
            fail(Module::semiabelian, ErrorKind::invariant, "denominator < 1", "/denominator");
        for (int i = 0; i < phi_tor.rows(); ++i)
            for (int j = 0; j < phi_tor.cols(); ++j)
                if (!is_integer(Rat(phi_tor(i, j) * denominator)))
                    fail(Module::semiabelian, ErrorKind::invariant,
                         "denominator does not clear phi_tor", "/phi_tor");
        for (size_t b = 0; b < phi_ab.size(); ++b)
            for (const auto& e : phi_ab[b].a)
                for (const auto& c : e.coords)
                    if (!is_integer(Rat(c * denominator)))
                        fail(Module::semiabelian, ErrorKind::invariant,
                             "denominator does not clear phi_ab", "/phi_ab/" + std::to_string(b));
    }

    const AlgebraElement& ab_at(size_t block, int i, int j) const {
        return phi_ab[block].at(i, j);
    }
};

// ---------------------------------------------------------------------------

/// (phi_tor)_* eta: column v of the result is sum_u a_uv . (column u of eta),
/// with the rational coefficients acting Q-linearly on the gamma-expansions.
inline ExtClassMatrix pushforward_ext(const RatMatrix& phi_tor, const ExtClassMatrix& eta) {
    ExtClassMatrix out;
    for (const ExtBlock& e : eta.blocks) {
        if (phi_tor.cols() != e.cols)
            fail(Module::semiabelian, ErrorKind::invariant, "pushforward shape mismatch");
        ExtBlock r(e.algebra, e.rows, phi_tor.rows(), e.l);
        for (int i = 0; i < e.rows; ++i)
            for (int v = 0; v < phi_tor.rows(); ++v)
                for (int k = 0; k < e.l; ++k) {
                    AlgebraElement acc = AlgebraElement::zero(e.algebra);
                    for (int u = 0; u < e.cols; ++u)
                        acc = algebra_add(acc, algebra_scale(phi_tor(v, u), e.at(i, u, k)));
                    r.at(i, v, k) = acc;
                }
        out.blocks.push_back(std::move(r));
    }
    return out;
}

/// (phi_ab)^* mu: applies the dual-side matrix (the transpose of the r' x r
/// point-side block matrix) to each column of mu independently.
inline ExtClassMatrix pullback_ext(const HomPair& pair, const ExtClassMatrix& mu) {
    ExtClassMatrix out;
    if (mu.blocks.size() != pair.phi_ab.size())
        fail(Module::semiabelian, ErrorKind::invariant, "pullback block count mismatch");
    for (size_t b = 0; b < mu.blocks.size(); ++b) {
        const ExtBlock& m = mu.blocks[b];
        const int rp = pair.phi_ab[b].rows, r = pair.phi_ab[b].cols;
        if (m.rows != rp)
            fail(Module::semiabelian, ErrorKind::invariant, "pullback needs r' rows on mu side");
        const AlgebraPtr alg = m.algebra;
        ExtBlock outb(alg, r, m.cols, m.l);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < m.cols; ++j)
                for (int k = 0; k < m.l; ++k) {
                    AlgebraElement acc = AlgebraElement::zero(alg);
                    for (int ip = 0; ip < rp; ++ip)
                        acc = algebra_add(acc, algebra_mul(pair.ab_at(b, ip, i), m.at(ip, j, k)));
                    outb.at(i, j, k) = acc;
                }
        out.blocks.push_back(std::move(outb));
    }
    return out;
}

namespace detail {

inline void check_pair_shapes(const SemiabelianDescriptor& g, const HomPair& pair, int t_prime) {
    if (pair.phi_tor.cols() != g.toric_rank || pair.phi_tor.rows() != t_prime)
        fail(Module::semiabelian, ErrorKind::invariant, "phi_tor shape mismatch");
    if (pair.phi_ab.size() != g.blocks.size())
        fail(Module::semiabelian, ErrorKind::invariant, "phi_ab block count mismatch");
    for (size_t b = 0; b < g.blocks.size(); ++b) {
        if (pair.phi_ab[b].cols != g.blocks[b].r)
            fail(Module::semiabelian, ErrorKind::invariant, "phi_ab column count != r");
    }
}

inline void check_block_compat(const SemiabelianDescriptor& g, const SemiabelianDescriptor& gp) {
    if (g.blocks.size() != gp.blocks.size())
        fail(Module::semiabelian, ErrorKind::invariant, "incompatible block structures");
    for (size_t b = 0; b < g.blocks.size(); ++b) {
        if (!g.blocks[b].algebra->same_structure(*gp.blocks[b].algebra) ||
            g.blocks[b].gamma_rank != gp.blocks[b].gamma_rank)
            fail(Module::semiabelian, ErrorKind::invariant, "incompatible block structures");
    }
}

}  // namespace detail

/// Lemma-semiabelian1 membership test: (phi_tor)_* eta_G = (phi_ab)^* eta_G'
/// after clearing denominators and torsion.  In the gamma-coefficient model
/// both multiplications are exact rational scalings, so the comparison is an
/// exact equality of coefficient tensors.
inline bool is_homomorphism_pair(const SemiabelianDescriptor& g, const SemiabelianDescriptor& gp,
                                 const HomPair& pair) {
    g.validate();
    gp.validate();
    pair.validate();
    detail::check_block_compat(g, gp);
    detail::check_pair_shapes(g, pair, gp.toric_rank);
    for (size_t b = 0; b < g.blocks.size(); ++b)
        if (pair.phi_ab[b].rows != gp.blocks[b].r)
            fail(Module::semiabelian, ErrorKind::invariant, "phi_ab row count != r of target");
    ExtClassMatrix push = pushforward_ext(pair.phi_tor, g.eta);
    ExtClassMatrix pull = pullback_ext(pair, gp.eta);
    return push == pull;
}

/// Theorem-realizable decision for a fixed pair: searches for mu with
/// pushforward(phi_tor, eta_G) = pullback(phi_ab, mu), column-by-column and
/// basis-coefficient-by-basis-coefficient via image membership over the
/// regular representation of each block algebra.
inline std::optional<ExtClassMatrix> realizable_pair(const SemiabelianDescriptor& g, int t_prime,
                                                     const HomPair& pair) {
    g.validate();
    pair.validate();
    detail::check_pair_shapes(g, pair, t_prime);
    for (size_t b = 0; b < g.blocks.size(); ++b)
        if (pair.phi_ab[b].rows != g.blocks[b].r_prime)
            fail(Module::semiabelian, ErrorKind::invariant, "phi_ab row count != declared r_prime");

    ExtClassMatrix target = pushforward_ext(pair.phi_tor, g.eta);
    ExtClassMatrix witness;
    for (size_t b = 0; b < g.blocks.size(); ++b) {
        const IsotypicBlock& blk = g.blocks[b];
        const AlgebraPtr D = blk.algebra;
        const int n = D->dim();
        const int r = blk.r, rp = blk.r_prime, l = blk.gamma_rank;

        // dual-side matrix B = phi_ab^T, expanded through the regular representation
        RatMatrix big(n * r, n * rp);
        for (int i = 0; i < r; ++i)
            for (int ip = 0; ip < rp; ++ip) {
                RatMatrix li = regular_representation(D, pair.ab_at(b, ip, i));
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) big(i * n + p, ip * n + q) = li(p, q);
            }

        ExtBlock mu(D, rp, t_prime, l);
        for (int v = 0; v < t_prime; ++v)
            for (int k = 0; k < l; ++k) {
                std::vector<Rat> y(static_cast<size_t>(n) * r);
                for (int i = 0; i < r; ++i)
                    for (int p = 0; p < n; ++p)
                        y[static_cast<size_t>(i) * n + p] = target.blocks[b].at(i, v, k).coords[p];
                auto x = solve(big, y);
                if (!x) return std::nullopt;
                for (int ip = 0; ip < rp; ++ip) {
                    std::vector<Rat> coords(n);
                    for (int p = 0; p < n; ++p) coords[p] = (*x)[static_cast<size_t>(ip) * n + p];
                    mu.at(ip, v, k) = AlgebraElement(D, std::move(coords));
                }
            }
        witness.blocks.push_back(std::move(mu));
    }
    return witness;
}

/// Does ANY block matrix B in D^{r x r'} solve the realizability equations
/// for the given toric column, all gamma-coefficients simultaneously?
/// Since the image of such a B is the D-span of at most r' vectors, and
/// conversely every D-span of <= r' vectors is such an image, this holds
/// iff the span of the assembled coefficient vectors has D-dimension <= r'.
/// A negative r_prime defers to each block's declared multiplicity.
inline bool exists_abelian_realization(const SemiabelianDescriptor& g, int r_prime,
                                       const std::vector<Rat>& phi_tor_column) {
    g.validate();
    if (static_cast<int>(phi_tor_column.size()) != g.toric_rank)
        fail(Module::semiabelian, ErrorKind::invariant, "column length != toric rank");
    for (size_t b = 0; b < g.blocks.size(); ++b) {
        const IsotypicBlock& blk = g.blocks[b];
        const int bound = r_prime >= 0 ? r_prime : blk.r_prime;
        std::vector<std::vector<AlgebraElement>> vecs;
        for (int k = 0; k < blk.gamma_rank; ++k) {
            std::vector<AlgebraElement> vk;
            bool all_zero = true;
            for (int i = 0; i < blk.r; ++i) {
                AlgebraElement acc = AlgebraElement::zero(blk.algebra);
                for (int j = 0; j < g.toric_rank; ++j)
                    acc = algebra_add(acc,
                                      algebra_scale(phi_tor_column[j], g.eta.blocks[b].at(i, j, k)));
                all_zero = all_zero && acc.is_zero();
                vk.push_back(std::move(acc));
            }
            if (!all_zero) vecs.push_back(std::move(vk));
        }
        if (d_span_rank(blk.algebra, vecs) > bound) return false;
    }
    return true;
}

struct KernelUpToTorsion {
    std::vector<IntVec> toric_basis;                                  // primitive lattice basis
    std::vector<std::vector<std::vector<AlgebraElement>>> abelian_basis;  // per block, Q-basis
};

/// Kernel-up-to-torsion data of a quasi-homomorphism pair: the primitive
/// integer kernel of n.phi_tor on cocharacters, and a Q-basis of the kernel
/// of the point-side matrix of n.phi_ab per block.  Both are independent of
/// the chosen denominator.
inline KernelUpToTorsion kernel_up_to_torsion(const HomPair& pair) {
    pair.validate();
    KernelUpToTorsion out;
    IntMat m(pair.phi_tor.rows(), IntVec(pair.phi_tor.cols()));
    for (int i = 0; i < pair.phi_tor.rows(); ++i)
        for (int j = 0; j < pair.phi_tor.cols(); ++j) {
            Rat cleared = pair.phi_tor(i, j) * pair.denominator;
            m[i][j] = cleared.get_num();
        }
    out.toric_basis = pair.phi_tor.rows() > 0
                          ? integer_kernel_basis(m)
                          : [&] {
                                std::vector<IntVec> full;
                                for (int j = 0; j < pair.phi_tor.cols(); ++j) {
                                    IntVec e(pair.phi_tor.cols(), 0);
                                    e[j] = 1;
                                    full.push_back(std::move(e));
                                }
                                return full;
                            }();

    for (size_t b = 0; b < pair.phi_ab.size(); ++b) {
        const int rp = pair.phi_ab[b].rows, r = pair.phi_ab[b].cols;
        if (rp * r == 0) {
            // zero map: whole space is kernel
            std::vector<std::vector<AlgebraElement>> basis;
            out.abelian_basis.push_back(std::move(basis));
            continue;
        }
        const AlgebraPtr D = pair.phi_ab[b].algebra;
        const int n = D->dim();
        RatMatrix big(n * rp, n * r);
        for (int ip = 0; ip < rp; ++ip)
            for (int i = 0; i < r; ++i) {
                RatMatrix li = regular_representation(D, pair.ab_at(b, ip, i));
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) big(ip * n + p, i * n + q) = li(p, q);
            }
        std::vector<std::vector<AlgebraElement>> basis;
        for (const auto& v : kernel_basis(big)) {
            std::vector<AlgebraElement> vec;
            for (int i = 0; i < r; ++i) {
                std::vector<Rat> coords(v.begin() + static_cast<size_t>(i) * n,
                                        v.begin() + static_cast<size_t>(i + 1) * n);
                vec.emplace_back(D, std::move(coords));
            }
            basis.push_back(std::move(vec));
        }
        out.abelian_basis.push_back(std::move(basis));
    }
    return out;
}

}  // namespace sak
