#include "limitset/constructions.hpp"
#include "limitset/dimension.hpp"
#include "limitset/exponent.hpp"
#include "limitset/kleinian.hpp"
#include "limitset/regularity.hpp"
#include "limitset/report.hpp"
#include "limitset/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace limitset;

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

int cmd_generate(const std::string& name, int n, int K, double alpha, double beta, double t,
                 double gamma, int max_len, int steps, std::uint64_t seed,
                 const std::string& out_path) {
    DiscretePointSet E = [&]() -> DiscretePointSet {
        if (name == "schottky") {
            GroupPresentation G = schottky_group(t);
            if (G.discreteness_warning)
                std::cerr << "warning: t below the ping-pong threshold 4; discreteness not guaranteed\n";
            return enumerate_orbit(G, max_len).points;
        }
        if (name == "parabolic") return enumerate_orbit(parabolic_group(), steps).points;
        GalleryParams p;
        p.alpha = alpha;
        p.beta = beta;
        p.t = t;
        p.gamma = gamma;
        return gallery(name, n, K, p, seed);
    }();
    save_pointset(E, out_path);
    std::cout << "wrote " << out_path << " (" << E.size() << " points, depth " << E.depth()
              << ")\n";
    return 0;
}

int cmd_analyze(const std::string& file, bool with_box, bool with_profiles,
                const std::string& c_grid, bool allow_unseeded, const std::string& csv_bins,
                const std::string& csv_packing, const std::string& csv_cover,
                const std::string& out_path) {
    const DiscretePointSet E = load_pointset(file, !allow_unseeded);
    const ScaleBins bins = dyadic_counts(E);

    nlohmann::ordered_json rep;
    rep["file"] = file;
    rep["generator"] = E.meta().generator;
    rep["n"] = E.dimension();
    rep["count"] = E.size();
    rep["depth"] = E.depth();

    auto estimate_json = [&](ExponentMethod method) {
        const ExponentEstimate est = critical_exponent(bins, method);
        nlohmann::ordered_json j;
        j["delta_hat"] = est.delta_hat;
        j["window"] = {est.window.first, est.window.second};
        if (method == ExponentMethod::regression) j["slope_stderr"] = est.slope_stderr;
        if (est.all_singletons) j["warning"] = "all bins in the window are singletons; exponent 0";
        return j;
    };
    rep["exponent"]["regression"] = estimate_json(ExponentMethod::regression);
    rep["exponent"]["limsup"] = estimate_json(ExponentMethod::limsup);

    if (with_box) {
        // the deepest dyadic bin is [2^-depth, 2^{1-depth}); include all of it
        const double rho = std::exp2(1 - E.depth());
        const Mat surrogate = approximate_limit_set(E, rho);
        const int k_max = std::max(7, E.depth() - 3);
        const BoxDimensionEstimate box = box_dimension_estimate(surrogate, 4, k_max);
        rep["limit_surrogate"]["resolution_log2"] = 1 - E.depth();
        rep["limit_surrogate"]["boxdim_slope"] = box.slope;
        rep["limit_surrogate"]["boxdim_lower"] = box.lower_slope;
        rep["limit_surrogate"]["boxdim_upper"] = box.upper_slope;
        if (!csv_packing.empty()) write_or_print(packing_counts_csv(box), csv_packing);
    }
    if (!csv_cover.empty()) {
        // (s, cover mass) curve at the deepest quarter truncation
        const double r = std::exp2(-(3 * E.depth()) / 4);
        std::vector<double> s_grid;
        for (double s = 0.0; s <= E.dimension() + 1e-9; s += 0.05) s_grid.push_back(s);
        write_or_print(cover_mass_csv(E, 1.0, r, s_grid), csv_cover);
    }
    if (with_profiles) {
        const SeparationProfile sep = separation_profile(E);
        rep["separation"]["c1_hat"] = sep.c1_hat;
        rep["separation"]["alpha_fit"] = sep.alpha_fit;
        const Mat surrogate = approximate_limit_set(E, std::exp2(1 - E.depth()));
        const ApproximationProfile appr = approximation_profile(E, surrogate);
        rep["approximation"]["c2_hat"] = appr.c2_hat;
        rep["approximation"]["beta_fit"] = appr.beta_fit;
        rep["approximation"]["reference_mode"] = appr.reference_mode;
        rep["approximation"]["resolution_log2"] = 1 - E.depth();
    }
    if (!c_grid.empty()) {
        // radial membership of deep projections for a grid of cone constants
        const Mat candidates = approximate_limit_set(E, std::exp2(1 - E.depth()));
        const int probe = std::min<int>(candidates.rows(), 32);
        nlohmann::ordered_json grid = nlohmann::ordered_json::array();
        std::stringstream ss(c_grid);
        double c;
        char comma;
        while (ss >> c) {
            RadialQuery q{c, 1.0, std::exp2(1 - E.depth())};
            const auto members = radial_members(E, candidates.topRows(probe), q);
            int accepted = 0;
            for (const auto& m : members) accepted += m.accepted ? 1 : 0;
            nlohmann::ordered_json e;
            e["c"] = c;
            e["accepted"] = accepted;
            e["probed"] = probe;
            grid.push_back(e);
            if (!(ss >> comma)) break;
        }
        rep["radial_c_grid"] = grid;
    }
    if (!csv_bins.empty()) write_or_print(bins_to_csv(bins), csv_bins);
    write_or_print(dump_json17(rep), out_path);
    return 0;
}

int cmd_construct(const std::string& kind, double ratio, int maps, double s, int K,
                  std::int64_t budget, std::uint64_t seed, const std::string& parts_spec,
                  const std::string& out_path) {
    auto model = [&]() { return BoundaryModel::cantor(ratio, maps); };
    if (kind == "net") {
        const DiscretePointSet E = net_construction(model(), K, seed);
        save_pointset(E, out_path);
        std::cout << "wrote " << out_path << " (" << E.size() << " points)\n";
        return 0;
    }
    if (kind == "vitali") {
        const CoverFamily cover = build_cover_family(model(), s, K, budget);
        const VitaliResult vit = vitali_construction(cover);
        save_pointset(vit.points, out_path);
        std::cout << "wrote " << out_path << " (" << vit.points.size() << " points, "
                  << vit.materialized_layers << "/" << cover.layers.size()
                  << " layers materialized)\n";
        return 0;
    }
    if (kind == "fsigma") {
        std::vector<FsigmaPart> parts;
        std::stringstream ss(parts_spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double r, sp;
            if (std::sscanf(item.c_str(), "%lf:%lf", &r, &sp) != 2)
                throw std::invalid_argument("construct fsigma: parts must look like ratio:s,ratio:s");
            parts.push_back({BoundaryModel::cantor(r, 2), sp});
        }
        if (parts.empty()) throw std::invalid_argument("construct fsigma: no parts given");
        const FsigmaResult merged = fsigma_merge(parts, K, budget);
        save_pointset(merged.points, out_path);
        std::cout << "wrote " << out_path << " (" << merged.points.size() << " points, "
                  << merged.stages.size() << " stages)\n";
        return 0;
    }
    throw std::invalid_argument("construct: unknown kind '" + kind + "'");
}

int cmd_verify(const std::string& id, double tol, std::uint64_t seed, int depth,
               const std::string& out_path) {
    const VerificationReport rep = run_verification(id, tol, seed, depth);
    std::cout << rep.summary_text();
    if (!out_path.empty()) write_or_print(dump_json17(rep.to_json()), out_path);
    else std::cout << dump_json17(rep.to_json());
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limitset: discrete subsets of the unit ball, critical exponents, and limit-set dimensions"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "build a gallery set or group orbit and write it");
    std::string gen_name;
    int gen_n = 2, gen_K = 20, gen_max_len = 8, gen_steps = 1000;
    double gen_alpha = 1.25, gen_beta = 0.75, gen_t = 4.0, gen_gamma = 1.0;
    std::uint64_t gen_seed = 7;
    std::string gen_out = "pointset.txt";
    gen->add_option("name", gen_name,
                    "example1|example2|example3|example4|alphabeta|gamma-radial|ray|schottky|parabolic")
        ->required();
    gen->add_option("--n", gen_n, "ambient dimension");
    gen->add_option("--depth", gen_K, "max dyadic depth K");
    gen->add_option("--alpha", gen_alpha, "separation exponent (alphabeta)");
    gen->add_option("--beta", gen_beta, "approximation exponent (alphabeta)");
    gen->add_option("--t", gen_t, "translation length (schottky) or series exponent (gamma-radial)");
    gen->add_option("--gamma", gen_gamma, "radial exponent (gamma-radial)");
    gen->add_option("--max-len", gen_max_len, "max reduced word length (schottky)");
    gen->add_option("--steps", gen_steps, "parabolic steps");
    gen->add_option("--seed", gen_seed, "seed recorded in meta");
    gen->add_option("--out", gen_out, "output path");

    // analyze
    auto* ana = app.add_subcommand("analyze", "estimate exponents and profiles of a point-set file");
    std::string ana_file, ana_cgrid, ana_csv_bins, ana_csv_packing, ana_csv_cover, ana_out;
    bool ana_box = false, ana_profiles = false, ana_unseeded = false;
    ana->add_option("file", ana_file, "pointset file")->required();
    ana->add_flag("--box", ana_box, "box dimension of the limit surrogate");
    ana->add_flag("--profiles", ana_profiles, "separation/approximation profiles");
    ana->add_option("--c-grid", ana_cgrid, "comma-separated cone constants for radial membership");
    ana->add_flag("--allow-unseeded", ana_unseeded, "accept files without a seed in the sidecar");
    ana->add_option("--csv-bins", ana_csv_bins, "write (k, N_k, log2 N_k) rows to this path");
    ana->add_option("--csv-packing", ana_csv_packing,
                    "write (k, N_{2^-k}) packing rows for the limit surrogate (needs --box)");
    ana->add_option("--csv-cover", ana_csv_cover, "write (s, cover mass) rows for the deep tail");
    ana->add_option("--out", ana_out, "write the JSON report here instead of stdout");

    // construct
    auto* con = app.add_subcommand("construct", "net / vitali / fsigma boundary-driven sets");
    std::string con_kind, con_parts, con_out = "construct.txt";
    double con_ratio = 1.0 / 3.0, con_s = 0.7;
    int con_maps = 2, con_K = 12;
    std::int64_t con_budget = 2'000'000;
    std::uint64_t con_seed = 7;
    con->add_option("kind", con_kind, "net|vitali|fsigma")->required();
    con->add_option("--ratio", con_ratio, "contraction ratio of the self-similar target");
    con->add_option("--maps", con_maps, "number of contractions");
    con->add_option("--s", con_s, "target cover exponent (vitali)");
    con->add_option("--depth", con_K, "layers / max dyadic window");
    con->add_option("--budget", con_budget, "ball materialization budget");
    con->add_option("--seed", con_seed, "seed for net rotations");
    con->add_option("--parts", con_parts, "fsigma parts, ratio:s,ratio:s");
    con->add_option("--out", con_out, "output path");

    // verify
    auto* ver = app.add_subcommand("verify", "run the canonical experiment for a theorem id");
    std::string ver_id, ver_out;
    double ver_tol = 0.1;
    int ver_depth = 0;
    std::uint64_t ver_seed = 7;
    ver->add_option("id", ver_id, "sepwa|radial|bigthm|boxchar|hauschar|alphabeta|gammaradial|kleinian")
        ->required();
    ver->add_option("--tol", ver_tol, "tolerance for dimension/exponent comparisons");
    ver->add_option("--depth", ver_depth, "override the experiment's pinned depth");
    ver->add_option("--seed", ver_seed, "seed");
    ver->add_option("--out", ver_out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_name, gen_n, gen_K, gen_alpha, gen_beta, gen_t, gen_gamma,
                                gen_max_len, gen_steps, gen_seed, gen_out);
        if (ana->parsed())
            return cmd_analyze(ana_file, ana_box, ana_profiles, ana_cgrid, ana_unseeded,
                               ana_csv_bins, ana_csv_packing, ana_csv_cover, ana_out);
        if (con->parsed())
            return cmd_construct(con_kind, con_ratio, con_maps, con_s, con_K, con_budget, con_seed,
                                 con_parts, con_out);
        if (ver->parsed()) return cmd_verify(ver_id, ver_tol, ver_seed, ver_depth, ver_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
