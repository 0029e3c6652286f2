#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sak/bhc.hpp"
#include "sak/chern.hpp"
#include "sak/chow.hpp"
#include "sak/heights.hpp"
#include "sak/semiabelian.hpp"

namespace sak::io {

using nlohmann::json;

// Rationals travel as "p/q" strings; integers as JSON numbers when they fit,
// strings otherwise.  All decimal report fields are fixed-format strings so
// that identical inputs produce byte-identical output.

inline std::string decimal(double v, int places = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

inline std::string scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline json height_json(const HeightValue& h) {
    return json{{"value", decimal(h.value)}, {"error_bound", scientific(h.error)}};
}

[[noreturn]] inline void schema_error(const std::string& msg, const std::string& where) {
    fail(Module::cli, ErrorKind::schema, msg, where);
}

inline Rat rat_from(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return parse_rat(j.get<std::string>(), where);
    schema_error("expected a rational ('p/q' string or integer)", where);
}

inline json rat_to(const Rat& r) { return format_rat(r); }

inline Int int_from(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) {
        Int v;
        if (mpz_set_str(v.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
            schema_error("unparsable integer", where);
        return v;
    }
    schema_error("expected an integer", where);
}

inline json int_to(const Int& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        schema_error(std::string("missing field '") + key + "'", where);
    return j.at(key);
}

// ---------------------------------------------------------------------------
// exact_linalg

inline AlgebraPtr algebra_from(const json& j, const std::string& where) {
    int n = field(j, "dim", where).get<int>();
    if (n < 1) fail(Module::exact_linalg, ErrorKind::invariant, "dim < 1", where + "/dim");
    const json& cs = field(j, "constants", where);
    if (!cs.is_array() || static_cast<int>(cs.size()) != n)
        schema_error("constants must be an n x n x n array", where + "/constants");
    std::vector<Rat> c;
    c.reserve(static_cast<size_t>(n) * n * n);
    for (int i = 0; i < n; ++i) {
        const json& plane = cs.at(i);
        if (!plane.is_array() || static_cast<int>(plane.size()) != n)
            schema_error("constants must be an n x n x n array",
                         where + "/constants/" + std::to_string(i));
        for (int jx = 0; jx < n; ++jx) {
            const json& row = plane.at(jx);
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                schema_error("constants must be an n x n x n array",
                             where + "/constants/" + std::to_string(i) + "/" + std::to_string(jx));
            for (int k = 0; k < n; ++k)
                c.push_back(rat_from(row.at(k), where + "/constants/" + std::to_string(i) + "/" +
                                                    std::to_string(jx) + "/" + std::to_string(k)));
        }
    }
    const json& uj = field(j, "unit", where);
    std::vector<Rat> unit;
    for (size_t k = 0; k < uj.size(); ++k)
        unit.push_back(rat_from(uj.at(k), where + "/unit/" + std::to_string(k)));
    return std::make_shared<QAlgebra>(n, std::move(c), std::move(unit));
}

inline json algebra_to(const QAlgebra& a) {
    json cs = json::array();
    for (int i = 0; i < a.dim(); ++i) {
        json plane = json::array();
        for (int jx = 0; jx < a.dim(); ++jx) {
            json row = json::array();
            for (int k = 0; k < a.dim(); ++k) row.push_back(rat_to(a.c(i, jx, k)));
            plane.push_back(std::move(row));
        }
        cs.push_back(std::move(plane));
    }
    json unit = json::array();
    for (const auto& u : a.unit_coords()) unit.push_back(rat_to(u));
    return json{{"dim", a.dim()}, {"constants", std::move(cs)}, {"unit", std::move(unit)}};
}

inline RatMatrix rat_matrix_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema_error("expected a nonempty matrix", where);
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j.at(0).size());
    RatMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            schema_error("ragged matrix", where + "/" + std::to_string(i));
        for (int k = 0; k < cols; ++k)
            m(i, k) = rat_from(row.at(k), where + "/" + std::to_string(i) + "/" + std::to_string(k));
    }
    return m;
}

inline json rat_matrix_to(const RatMatrix& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(rat_to(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// semiabelian model

inline SemiabelianDescriptor descriptor_from(const json& j) {
    SemiabelianDescriptor g;
    g.toric_rank = field(j, "t", "").get<int>();
    const json& bj = field(j, "blocks", "");
    for (size_t b = 0; b < bj.size(); ++b) {
        const std::string where = "/blocks/" + std::to_string(b);
        IsotypicBlock blk;
        blk.algebra = algebra_from(field(bj.at(b), "algebra", where), where + "/algebra");
        blk.gamma_rank = field(bj.at(b), "l", where).get<int>();
        blk.torsion_exponent = int_from(field(bj.at(b), "e", where), where + "/e");
        blk.r = field(bj.at(b), "r", where).get<int>();
        blk.r_prime = field(bj.at(b), "r_prime", where).get<int>();
        g.blocks.push_back(std::move(blk));
    }
    const json& ej = field(j, "eta", "");
    if (ej.size() != g.blocks.size())
        fail(Module::semiabelian, ErrorKind::invariant, "eta block count mismatch", "/eta");
    for (size_t b = 0; b < ej.size(); ++b) {
        const std::string wb = "/eta/" + std::to_string(b);
        const IsotypicBlock& blk = g.blocks[b];
        const json& tensor = ej.at(b);
        if (static_cast<int>(tensor.size()) != blk.r)
            fail(Module::semiabelian, ErrorKind::invariant, "eta dimension mismatch", wb);
        ExtBlock eb(blk.algebra, blk.r, g.toric_rank, blk.gamma_rank);
        for (int i = 0; i < blk.r; ++i) {
            const json& row = tensor.at(i);
            if (static_cast<int>(row.size()) != g.toric_rank)
                fail(Module::semiabelian, ErrorKind::invariant, "eta dimension mismatch",
                     wb + "/" + std::to_string(i));
            for (int jx = 0; jx < g.toric_rank; ++jx) {
                const json& depth = row.at(jx);
                if (static_cast<int>(depth.size()) != blk.gamma_rank)
                    fail(Module::semiabelian, ErrorKind::invariant, "eta dimension mismatch",
                         wb + "/" + std::to_string(i) + "/" + std::to_string(jx));
                for (int k = 0; k < blk.gamma_rank; ++k) {
                    const json& coeff = depth.at(k);
                    const std::string wc = wb + "/" + std::to_string(i) + "/" +
                                           std::to_string(jx) + "/" + std::to_string(k);
                    if (static_cast<int>(coeff.size()) != blk.algebra->dim())
                        fail(Module::semiabelian, ErrorKind::invariant,
                             "coefficient length != algebra dim", wc);
                    std::vector<Rat> v;
                    for (size_t p = 0; p < coeff.size(); ++p)
                        v.push_back(rat_from(coeff.at(p), wc + "/" + std::to_string(p)));
                    eb.at(i, jx, k) = AlgebraElement(blk.algebra, std::move(v));
                }
            }
        }
        g.eta.blocks.push_back(std::move(eb));
    }
    g.validate();
    return g;
}

inline json ext_class_to(const ExtClassMatrix& m) {
    json out = json::array();
    for (const auto& b : m.blocks) {
        json tensor = json::array();
        for (int i = 0; i < b.rows; ++i) {
            json row = json::array();
            for (int jx = 0; jx < b.cols; ++jx) {
                json depth = json::array();
                for (int k = 0; k < b.l; ++k) {
                    json coeff = json::array();
                    for (const auto& c : b.at(i, jx, k).coords) coeff.push_back(rat_to(c));
                    depth.push_back(std::move(coeff));
                }
                row.push_back(std::move(depth));
            }
            tensor.push_back(std::move(row));
        }
        out.push_back(std::move(tensor));
    }
    return out;
}

inline json descriptor_to(const SemiabelianDescriptor& g) {
    json blocks = json::array();
    for (const auto& b : g.blocks)
        blocks.push_back(json{{"algebra", algebra_to(*b.algebra)},
                              {"l", b.gamma_rank},
                              {"e", int_to(b.torsion_exponent)},
                              {"r", b.r},
                              {"r_prime", b.r_prime}});
    return json{{"t", g.toric_rank}, {"blocks", std::move(blocks)}, {"eta", ext_class_to(g.eta)}};
}

inline HomPair pair_from(const json& j, const SemiabelianDescriptor& g) {
    HomPair p;
    p.phi_tor = rat_matrix_from(field(j, "phi_tor", ""), "/phi_tor");
    p.denominator = int_from(field(j, "denominator", ""), "/denominator");
    const json& ab = field(j, "phi_ab", "");
    if (ab.size() != g.blocks.size())
        fail(Module::semiabelian, ErrorKind::invariant, "phi_ab block count mismatch", "/phi_ab");
    for (size_t b = 0; b < ab.size(); ++b) {
        const std::string wb = "/phi_ab/" + std::to_string(b);
        const json& mat = ab.at(b);
        int rows = static_cast<int>(mat.size());
        int cols = rows ? static_cast<int>(mat.at(0).size()) : 0;
        DMat m(g.blocks[b].algebra, rows, cols);
        for (int i = 0; i < rows; ++i) {
            const json& row = mat.at(i);
            if (static_cast<int>(row.size()) != cols)
                schema_error("ragged phi_ab block", wb + "/" + std::to_string(i));
            for (int k = 0; k < cols; ++k) {
                const json& coeff = row.at(k);
                const std::string wc = wb + "/" + std::to_string(i) + "/" + std::to_string(k);
                if (static_cast<int>(coeff.size()) != g.blocks[b].algebra->dim())
                    fail(Module::semiabelian, ErrorKind::invariant,
                         "coefficient length != algebra dim", wc);
                std::vector<Rat> v;
                for (size_t q = 0; q < coeff.size(); ++q)
                    v.push_back(rat_from(coeff.at(q), wc + "/" + std::to_string(q)));
                m.at(i, k) = AlgebraElement(g.blocks[b].algebra, std::move(v));
            }
        }
        p.phi_ab.push_back(std::move(m));
    }
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// heights

inline AlgebraicNumber algebraic_from(const json& j, const std::string& where) {
    if (j.is_string() || j.is_number_integer())
        return AlgebraicNumber::from_rational(rat_from(j, where));
    const json& pj = field(j, "poly", where);
    std::vector<Int> coeffs;
    for (size_t i = 0; i < pj.size(); ++i)
        coeffs.push_back(int_from(pj.at(i), where + "/poly/" + std::to_string(i)));
    IntPoly poly(std::move(coeffs));
    const json& re = field(j, "re", where);
    const json& im = field(j, "im", where);
    if (re.size() != 2 || im.size() != 2)
        schema_error("re/im must be [lo, hi] pairs", where);
    IsolatingBox box{rat_from(re.at(0), where + "/re/0"), rat_from(re.at(1), where + "/re/1"),
                     rat_from(im.at(0), where + "/im/0"), rat_from(im.at(1), where + "/im/1")};
    return AlgebraicNumber::from_poly_root(poly, box);
}

inline json algebraic_to(const AlgebraicNumber& a) {
    if (a.is_rational()) return rat_to(a.rational_value());
    json poly = json::array();
    for (const auto& c : a.minimal_polynomial().c) poly.push_back(int_to(c));
    const auto& b = a.isolating_box();
    return json{{"poly", std::move(poly)},
                {"re", json::array({rat_to(b.re_lo), rat_to(b.re_hi)})},
                {"im", json::array({rat_to(b.im_lo), rat_to(b.im_hi)})}};
}

inline TorusPointQbar torus_point_from(const json& j, const std::string& where) {
    TorusPointQbar x;
    const json& cj = field(j, "coords", where);
    for (size_t i = 0; i < cj.size(); ++i)
        x.coords.push_back(algebraic_from(cj.at(i), where + "/coords/" + std::to_string(i)));
    x.validate();
    return x;
}

inline json torus_point_to(const TorusPointQbar& x) {
    json coords = json::array();
    for (const auto& c : x.coords) coords.push_back(algebraic_to(c));
    return json{{"coords", std::move(coords)}};
}

inline AbelianPoint abelian_point_from(const json& j, const std::string& where) {
    AbelianPoint p;
    const json& vj = field(j, "vector", where);
    for (size_t i = 0; i < vj.size(); ++i)
        p.v.push_back(rat_from(vj.at(i), where + "/vector/" + std::to_string(i)));
    p.gram = rat_matrix_from(field(j, "gram", where), where + "/gram");
    p.validate();
    return p;
}

inline json abelian_point_to(const AbelianPoint& p) {
    json v = json::array();
    for (const auto& x : p.v) v.push_back(rat_to(x));
    return json{{"vector", std::move(v)}, {"gram", rat_matrix_to(p.gram)}};
}

inline ModelPoint model_point_from(const json& j, const std::string& where) {
    ModelPoint p;
    p.toric = torus_point_from(field(j, "toric", where), where + "/toric");
    if (j.contains("abelian") && !j.at("abelian").is_null())
        p.abelian = abelian_point_from(j.at("abelian"), where + "/abelian");
    return p;
}

inline json model_point_to(const ModelPoint& p) {
    json out{{"toric", torus_point_to(p.toric)}};
    out["abelian"] = p.abelian ? abelian_point_to(*p.abelian) : json(nullptr);
    return out;
}

inline CoverBox cover_box_from(const json& j) {
    CoverBox box;
    auto read = [&](const char* key, std::vector<std::pair<Rat, Rat>>& out) {
        if (!j.contains(key)) return;
        const json& arr = j.at(key);
        for (size_t i = 0; i < arr.size(); ++i) {
            const json& iv = arr.at(i);
            const std::string where = std::string("/") + key + "/" + std::to_string(i);
            if (iv.size() != 2) schema_error("interval must be [lo, hi]", where);
            out.emplace_back(rat_from(iv.at(0), where + "/0"), rat_from(iv.at(1), where + "/1"));
        }
    };
    read("toric", box.toric);
    read("abelian", box.abelian);
    return box;
}

// ---------------------------------------------------------------------------
// bhc

inline RationalCurve curve_from(const json& j) {
    const json& cj = field(j, "coords", "");
    std::vector<RationalCurve::Coordinate> coords;
    for (size_t u = 0; u < cj.size(); ++u) {
        const std::string where = "/coords/" + std::to_string(u);
        RationalCurve::Coordinate c;
        std::vector<Int> num, den{Int(1)};
        const json& nj = field(cj.at(u), "num", where);
        for (size_t i = 0; i < nj.size(); ++i)
            num.push_back(int_from(nj.at(i), where + "/num/" + std::to_string(i)));
        if (cj.at(u).contains("den")) {
            den.clear();
            const json& dj = cj.at(u).at("den");
            for (size_t i = 0; i < dj.size(); ++i)
                den.push_back(int_from(dj.at(i), where + "/den/" + std::to_string(i)));
        }
        c.num = IntPoly(std::move(num));
        c.den = IntPoly(std::move(den));
        coords.push_back(std::move(c));
    }
    return RationalCurve::from_fractions(coords);
}

// ---------------------------------------------------------------------------
// chern

inline CD complex_from(const json& j, const std::string& where) {
    if (j.is_number()) return CD(j.get<double>(), 0);
    if (j.is_array() && j.size() == 2) return CD(j.at(0).get<double>(), j.at(1).get<double>());
    schema_error("expected a number or [re, im]", where);
}

inline FlatAbelianData flat_abelian_from(const json& j, const std::string& where) {
    FlatAbelianData d;
    const json& hj = field(j, "H", where);
    for (size_t r = 0; r < hj.size(); ++r) {
        std::vector<CD> row;
        for (size_t c = 0; c < hj.at(r).size(); ++c)
            row.push_back(complex_from(hj.at(r).at(c),
                                       where + "/H/" + std::to_string(r) + "/" + std::to_string(c)));
        d.hermitian.push_back(std::move(row));
    }
    const json& lj = field(j, "lift", where);
    for (size_t r = 0; r < lj.size(); ++r) {
        std::vector<CD> row;
        for (size_t c = 0; c < lj.at(r).size(); ++c)
            row.push_back(complex_from(
                lj.at(r).at(c), where + "/lift/" + std::to_string(r) + "/" + std::to_string(c)));
        d.lift.push_back(std::move(row));
    }
    d.g = d.lift.empty() ? 0 : static_cast<int>(d.lift[0].size());
    if (j.contains("tau")) d.tau = complex_from(j.at("tau"), where + "/tau");
    d.validate();
    return d;
}

inline RealMat real_matrix_from(const json& j, const std::string& where) {
    RealMat m;
    if (!j.is_array()) schema_error("expected a matrix", where);
    for (size_t r = 0; r < j.size(); ++r) {
        std::vector<double> row;
        for (size_t c = 0; c < j.at(r).size(); ++c) {
            const json& x = j.at(r).at(c);
            const std::string wx = where + "/" + std::to_string(r) + "/" + std::to_string(c);
            if (x.is_number())
                row.push_back(x.get<double>());
            else
                row.push_back(to_double(rat_from(x, wx)));
        }
        m.push_back(std::move(row));
    }
    return m;
}

// ---------------------------------------------------------------------------

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Module::cli, ErrorKind::schema, "cannot open file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(Module::cli, ErrorKind::schema, std::string("JSON parse error: ") + e.what(),
             "/" + path);
    }
}

}  // namespace sak::io
