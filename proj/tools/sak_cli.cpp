// sak: exact-arithmetic toolkit for semiabelian models — Ext-class
// realizability, Chow intersection numbers on multiprojective
// compactifications, canonical heights, Chern-form numerics, and
// bounded-height scans on tori.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sak/io.hpp"

using namespace sak;
using nlohmann::json;

namespace {

void emit(const json& out, const std::string& path) {
    std::string text = out.dump(2);
    text += "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) fail(Module::cli, ErrorKind::schema, "cannot write '" + path + "'");
        f << text;
    }
}

void emit_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) fail(Module::cli, ErrorKind::schema, "cannot write '" + path + "'");
        f << text;
    }
}

json parse_inline(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Module::cli, ErrorKind::schema, "bad inline " + what + ": " + e.what());
    }
}

struct Options {
    std::string out;
    std::string model, model_prime, pair_path, point, curve, sigma, box, abelian;
    std::string matrix, phi_ab, target_degrees, base_gram, classes;
    std::string kind = "toric";
    std::string which = "beta";
    std::string u, v, epsilon = "1/100", delta = "1/2";
    long bound = 8, n_delta = 2, seed = 0, threads = 0, verify_samples = 0;
    int t_prime = 1, s = 0, s1 = 1, s2 = 0, index = 0, r_dim = 1;
    double c_weight = 1.0, tolerance = 1e-8;
};

int run(int argc, char** argv) {
    CLI::App app{
        "sak — exact semiabelian model calculus: realizability of "
        "(phi_tor, phi_ab) pairs, Chow intersection degrees, canonical "
        "heights, Chern-form numerics, bounded-height scans"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--out", o.out, "output path (default: stdout)")->capture_default_str();
    app.add_option("--seed", o.seed, "seed for randomized sampling options");
    app.add_option("--threads", o.threads,
                   "worker cap (default: hardware limit, bounded by SAK_THREADS)");

    auto* realize = app.add_subcommand("realize", "decide realizability of a pair, with witness");
    realize->add_option("--model", o.model, "semiabelian descriptor JSON file")->required();
    realize->add_option("--pair", o.pair_path, "HomPair JSON file")->required();
    realize->add_option("--tprime", o.t_prime, "target toric rank")->capture_default_str();

    auto* homchk = app.add_subcommand("hom-check", "Ext-class membership test for a pair");
    homchk->add_option("--model", o.model, "source descriptor JSON file")->required();
    homchk->add_option("--model-prime", o.model_prime, "target descriptor JSON file")->required();
    homchk->add_option("--pair", o.pair_path, "HomPair JSON file")->required();

    auto* chow = app.add_subcommand("chow", "toric intersection degrees and class products");
    chow->add_option("--matrix", o.matrix, "integer matrix [[...]] of the monomial map");
    chow->add_option("--s", o.s, "number of source-side hyperplane powers");
    chow->add_option("--classes", o.classes, "JSON file {factors, classes:[...]} to multiply");

    auto* bg = app.add_subcommand("beta-gamma", "intersection functionals beta_i / gamma_i");
    bg->add_option("--matrix", o.matrix, "toric matrix [[...]] (rational entries allowed)")
        ->required();
    bg->add_option("--phi-ab", o.phi_ab, "abelian map matrix [[...]]")->required();
    bg->add_option("--ndegrees", o.target_degrees, "target polarization degrees [..]")->required();
    bg->add_option("--base-gram", o.base_gram, "Gram of the reference bundle [[...]]");
    bg->add_option("--i", o.index, "functional index")->required();
    bg->add_option("--which", o.which, "beta or gamma")->capture_default_str();

    auto* alpha = app.add_subcommand("alpha", "alpha ratio and the bigness inequality check");
    alpha->add_option("--u", o.u, "deg(c1(L1)^r) as a rational")->required();
    alpha->add_option("--v", o.v, "deg(c1(L1)^{r-1} c1(q*L)) as a rational")->required();
    alpha->add_option("--r", o.r_dim, "cycle dimension")->required();

    auto* height = app.add_subcommand("height", "canonical heights of model points");
    height->add_option("--point", o.point, "point JSON file")->required();
    height->add_option("--kind", o.kind, "toric | graph | abelian | combined")
        ->capture_default_str();
    height->add_option("--matrix", o.matrix, "toric matrix for --kind graph");

    auto* cone = app.add_subcommand("cone", "height cone membership");
    cone->add_option("--sigma", o.sigma, "JSON file with the point list")->required();
    cone->add_option("--x", o.point, "candidate point JSON file")->required();
    cone->add_option("--epsilon", o.epsilon, "cone parameter")->capture_default_str();

    auto* cover = app.add_subcommand("cover", "covering grids in (1/n) V");
    cover->add_option("--box", o.box, "box JSON file {toric:[[lo,hi]...], abelian:[...]}")
        ->required();
    cover->add_option("--delta", o.delta, "covering radius")->capture_default_str();
    cover->add_option("--ndelta", o.n_delta, "grid denominator")->capture_default_str();
    cover->add_option("--verify-samples", o.verify_samples,
                      "sample count for a randomized covering check (uses --seed)");

    auto* form = app.add_subcommand("form", "g_omega matrices and kernel ranks");
    form->add_option("--phi-tor", o.matrix, "real toric matrix [[...]]")->required();
    form->add_option("--point", o.point, "torus point JSON {z:[[re,im],...]}")->required();
    form->add_option("--abelian", o.abelian, "flat abelian data JSON file");
    form->add_option("--c", o.c_weight, "toric weight in the combined form")
        ->capture_default_str();
    form->add_option("--tolerance", o.tolerance, "kernel eigenvalue tolerance")
        ->capture_default_str();

    auto* quad = app.add_subcommand("quadrature", "integrate top powers of the (1,1)-forms");
    quad->add_option("--phi-tor", o.matrix, "real toric matrix [[...]]")->required();
    quad->add_option("--abelian", o.abelian, "flat abelian data JSON file");
    quad->add_option("--c", o.c_weight, "toric prefactor")->capture_default_str();
    quad->add_option("--s1", o.s1, "toric power")->capture_default_str();
    quad->add_option("--s2", o.s2, "abelian power")->capture_default_str();

    auto* bhc = app.add_subcommand("bhc", "bounded-height scan of a parametrized curve");
    bhc->add_option("--curve", o.curve, "curve JSON file")->required();
    bhc->add_option("--bound", o.bound, "exponent bound B")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (realize->parsed()) {
        auto g = io::descriptor_from(io::load_file(o.model));
        auto p = io::pair_from(io::load_file(o.pair_path), g);
        auto witness = realizable_pair(g, o.t_prime, p);
        json out{{"realizable", witness.has_value()}};
        out["witness"] = witness ? io::ext_class_to(*witness) : json(nullptr);
        emit(out, o.out);
    } else if (homchk->parsed()) {
        auto g = io::descriptor_from(io::load_file(o.model));
        auto gp = io::descriptor_from(io::load_file(o.model_prime));
        auto p = io::pair_from(io::load_file(o.pair_path), g);
        emit(json{{"is_homomorphism", is_homomorphism_pair(g, gp, p)}}, o.out);
    } else if (chow->parsed()) {
        if (!o.matrix.empty()) {
            json mj = parse_inline(o.matrix, "matrix");
            SmallIntMat a;
            for (const auto& row : mj) {
                std::vector<long> r;
                for (const auto& x : row) r.push_back(x.get<long>());
                a.push_back(std::move(r));
            }
            int tp = static_cast<int>(a.size());
            int t = tp ? static_cast<int>(a[0].size()) : 0;
            Int deg = toric_intersection_degree(a, t, tp, o.s);
            emit(json{{"degree", io::int_to(deg)}}, o.out);
        } else if (!o.classes.empty()) {
            json cj = io::load_file(o.classes);
            std::vector<int> dims;
            for (const auto& d : io::field(cj, "factors", "")) dims.push_back(d.get<int>());
            auto ring = std::make_shared<MultiProjRing>(dims);
            ChowClass acc = ChowClass::one(ring);
            const json& cls = io::field(cj, "classes", "");
            for (size_t i = 0; i < cls.size(); ++i) {
                ChowClass c(ring);
                for (const auto& term : cls.at(i)) {
                    std::vector<int> expo;
                    for (const auto& e : io::field(term, "exponents", "")) expo.push_back(e.get<int>());
                    c.add_term(expo, io::int_from(io::field(term, "coeff", ""), "/coeff"));
                }
                acc = chow_mul(acc, c);
            }
            json terms = json::array();
            for (const auto& [m, c] : acc.terms())
                terms.push_back(json{{"exponents", m}, {"coeff", io::int_to(c)}});
            emit(json{{"product", terms}, {"degree", io::int_to(chow_degree(acc))}}, o.out);
        } else {
            fail(Module::cli, ErrorKind::schema, "chow needs --matrix or --classes");
        }
    } else if (bg->parsed()) {
        RatMatrix phi_tor = io::rat_matrix_from(parse_inline(o.matrix, "matrix"), "/matrix");
        AbelianDegreeData data;
        data.phi_ab = io::rat_matrix_from(parse_inline(o.phi_ab, "phi-ab"), "/phi_ab");
        json dj = parse_inline(o.target_degrees, "ndegrees");
        for (size_t i = 0; i < dj.size(); ++i)
            data.target_degrees.push_back(
                io::rat_from(dj.at(i), "/ndegrees/" + std::to_string(i)));
        if (o.base_gram.empty()) {
            data.base_gram = RatMatrix::identity(data.g());
        } else {
            data.base_gram = io::rat_matrix_from(parse_inline(o.base_gram, "base-gram"),
                                                 "/base_gram");
        }
        auto which = o.which == "gamma" ? BetaGamma::gamma : BetaGamma::beta;
        if (o.which != "gamma" && o.which != "beta")
            fail(Module::cli, ErrorKind::schema, "--which must be beta or gamma");
        Rat value = beta_gamma_eval(phi_tor, data, o.index, which);
        emit(json{{"value", io::rat_to(value)}}, o.out);
    } else if (alpha->parsed()) {
        auto res = alpha_and_siu(parse_rat(o.u, "/u"), parse_rat(o.v, "/v"), o.r_dim);
        emit(json{{"alpha", io::rat_to(res.alpha)},
                  {"siu_holds", res.siu_holds},
                  {"nothing_to_prove", res.nothing_to_prove}},
             o.out);
    } else if (height->parsed()) {
        json pj = io::load_file(o.point);
        json out;
        if (o.kind == "toric") {
            auto x = io::torus_point_from(pj, "");
            out = io::height_json(toric_canonical_height(x));
        } else if (o.kind == "graph") {
            if (o.matrix.empty())
                fail(Module::cli, ErrorKind::schema, "--kind graph needs --matrix");
            auto x = io::torus_point_from(pj, "");
            RatMatrix m = io::rat_matrix_from(parse_inline(o.matrix, "matrix"), "/matrix");
            out = io::height_json(graph_canonical_height(m, x));
        } else if (o.kind == "abelian") {
            auto p = io::abelian_point_from(pj, "");
            out = json{{"value", io::rat_to(abelian_model_height(p))}, {"error_bound", "0"}};
        } else if (o.kind == "combined") {
            auto p = io::model_point_from(pj, "");
            out = io::height_json(combined_height(p));
        } else {
            fail(Module::cli, ErrorKind::schema, "unknown --kind '" + o.kind + "'");
        }
        emit(out, o.out);
    } else if (cone->parsed()) {
        HeightConeQuery q;
        json sj = io::load_file(o.sigma);
        const json& list = io::field(sj, "points", "");
        for (size_t i = 0; i < list.size(); ++i)
            q.sigma.push_back(io::model_point_from(list.at(i), "/points/" + std::to_string(i)));
        q.x = io::model_point_from(io::load_file(o.point), "");
        q.epsilon = parse_rat(o.epsilon, "/epsilon");
        emit(json{{"member", height_cone_member(q)}}, o.out);
    } else if (cover->parsed()) {
        CoverBox box = io::cover_box_from(io::load_file(o.box));
        Rat delta = parse_rat(o.delta, "/delta");
        auto grid = cover_grid(box, delta, o.n_delta);
        json pairs = json::array();
        for (const auto& gp : grid) {
            json t = json::array(), a = json::array();
            for (const auto& x : gp.toric) t.push_back(io::rat_to(x));
            for (const auto& x : gp.abelian) a.push_back(io::rat_to(x));
            pairs.push_back(json{{"toric", std::move(t)}, {"abelian", std::move(a)}});
        }
        json out{{"pairs", std::move(pairs)}, {"count", grid.size()}};
        if (o.verify_samples > 0) {
            // randomized covering check, deterministic under --seed
            std::mt19937_64 rng(static_cast<uint64_t>(o.seed));
            std::uniform_int_distribution<long> num(0, 10000);
            long failures = 0;
            for (long s = 0; s < o.verify_samples; ++s) {
                auto sample_axis = [&](const std::pair<Rat, Rat>& iv) {
                    Rat t01(num(rng), 10000);
                    t01.canonicalize();
                    return iv.first + t01 * (iv.second - iv.first);
                };
                std::vector<Rat> pt, pa;
                for (const auto& iv : box.toric) pt.push_back(sample_axis(iv));
                for (const auto& iv : box.abelian) pa.push_back(sample_axis(iv));
                bool covered = false;
                for (const auto& gp : grid) {
                    bool ok = true;
                    for (size_t i = 0; i < pt.size() && ok; ++i)
                        ok = rat_abs(gp.toric[i] - pt[i]) <= delta;
                    for (size_t i = 0; i < pa.size() && ok; ++i) {
                        Rat d = rat_abs(gp.abelian[i] - pa[i]);
                        ok = d * d <= delta;
                    }
                    if (ok) { covered = true; break; }
                }
                if (!covered) ++failures;
            }
            out["verify"] = json{{"samples", o.verify_samples}, {"failures", failures}};
        }
        emit(out, o.out);
    } else if (form->parsed()) {
        RealMat a = io::real_matrix_from(parse_inline(o.matrix, "phi-tor"), "/phi_tor");
        json pj = io::load_file(o.point);
        TorusPointC z;
        for (size_t i = 0; i < io::field(pj, "z", "").size(); ++i)
            z.z.push_back(io::complex_from(pj.at("z").at(i), "/z/" + std::to_string(i)));
        FormMatrix g = toric_form_matrix(a, z);
        if (!o.abelian.empty()) {
            auto ab = io::flat_abelian_from(io::load_file(o.abelian), "");
            g = combined_form_matrix(o.c_weight, g, abelian_form_matrix(ab));
        }
        json rows = json::array();
        for (int p = 0; p < g.n(); ++p) {
            json row = json::array();
            for (int q = 0; q < g.n(); ++q) row.push_back(io::decimal(g.at(p, q), 15));
            rows.push_back(std::move(row));
        }
        emit(json{{"matrix", std::move(rows)},
                  {"kernel_rank", kernel_rank(g, o.tolerance)},
                  {"tolerance", io::scientific(o.tolerance)}},
             o.out);
    } else if (quad->parsed()) {
        RealMat a = io::real_matrix_from(parse_inline(o.matrix, "phi-tor"), "/phi_tor");
        int t = a.empty() ? 0 : static_cast<int>(a[0].size());
        std::optional<FlatAbelianData> ab;
        if (!o.abelian.empty()) ab = io::flat_abelian_from(io::load_file(o.abelian), "");
        auto res = integrate_top_power(a, t, ab ? &*ab : nullptr, o.c_weight, o.s1, o.s2);
        emit(json{{"value", io::decimal(res.value)},
                  {"error_estimate", io::scientific(res.error_estimate)},
                  {"grid_levels", res.grid_levels}},
             o.out);
    } else if (bhc->parsed()) {
        auto curve = io::curve_from(io::load_file(o.curve));
        auto report = bhc_scan(curve, o.bound, static_cast<int>(o.threads));
        if (!o.out.empty() && o.out != "-") {
            emit_text(bhc_csv(report), o.out);
        }
        json skipped = json::array();
        for (const auto& sk : report.table.skipped) {
            json v = json::array();
            for (const auto& x : sk) v.push_back(io::int_to(x));
            skipped.push_back(std::move(v));
        }
        json summary{{"max_height", io::height_json(report.max_height)},
                     {"anomalous", report.anomalous},
                     {"records", report.table.records.size()},
                     {"degenerate", report.table.degenerate},
                     {"skipped", std::move(skipped)}};
        std::cout << summary.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 19;
    }
}
