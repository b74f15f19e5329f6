#include "hutchinf/cantor.hpp"
#include "hutchinf/code_space.hpp"
#include "hutchinf/config.hpp"
#include "hutchinf/engine.hpp"
#include "hutchinf/render.hpp"
#include "hutchinf/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using hutchinf::ExperimentConfig;
using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

ExperimentConfig config_from(const std::string& config_path,
                             const std::string& system_name, int depth,
                             double prune, int prefix, double tol) {
    if (!config_path.empty()) return hutchinf::parse_config_json(slurp(config_path));
    ExperimentConfig cfg;
    cfg.system = hutchinf::system_by_name(system_name);
    cfg.viewport = hutchinf::default_viewport(cfg.system.name);
    cfg.run.depth = depth;
    cfg.run.prune_eps = prune;
    cfg.run.prefix = prefix;
    cfg.run.tol = tol;
    return cfg;
}

int cmd_render(const ExperimentConfig& cfg, const std::string& out,
               int resolution) {
    hutchinf::Viewport vp = cfg.viewport;
    if (resolution > 0) vp.resolution = resolution;
    auto seeds =
        hutchinf::SetSeq::constant(hutchinf::FiniteSet::singleton(cfg.system.seed_point));
    auto iterates = hutchinf::gen_iterate_sets(cfg.system, seeds, cfg.run.depth,
                                               cfg.run.prune_eps, cfg.run.prefix);
    hutchinf::Image img = hutchinf::rasterize_points(iterates.back(), vp);
    hutchinf::atomic_write_file(out, hutchinf::encode_ppm(img));
    std::cout << "wrote " << out << " (" << img.black_pixel_count()
              << " set pixels)\n";
    return 0;
}

int cmd_converge(const ExperimentConfig& cfg, const std::string& out,
                 bool allow_s2) {
    const hutchinf::GifsSystem& sys = cfg.system;
    auto conds = hutchinf::classify(sys);
    bool qp = conds.count(hutchinf::Condition::Q) ||
              conds.count(hutchinf::Condition::P);
    std::ostringstream os;
    if (qp) {
        auto rows = hutchinf::convergence_table(sys, hutchinf::default_seeds(sys),
                                                cfg.run.depth, cfg.run.prune_eps,
                                                cfg.run.prefix);
        hutchinf::write_convergence_csv(os, rows);
    } else if (allow_s2 && conds.count(hutchinf::Condition::S1)) {
        // no analytic bound here; tabulate the distance to the attractor
        hutchinf::AttractorApprox a = hutchinf::attractor(sys, cfg.run.tol);
        auto iterates =
            hutchinf::gen_iterate_sets(sys, hutchinf::default_seeds(sys),
                                       cfg.run.depth, cfg.run.prune_eps,
                                       cfg.run.prefix);
        os << "k,size,h_prev,h_attractor\n";
        char buf[64];
        for (int k = 1; k <= cfg.run.depth; ++k) {
            const hutchinf::FiniteSet& prev =
                k == 1 ? hutchinf::default_seeds(sys).at(0) : iterates[k - 2];
            double hp = hutchinf::hausdorff(iterates[k - 1], prev, sys.base);
            double ha = hutchinf::hausdorff(iterates[k - 1], a.cloud, sys.base);
            os << k << "," << iterates[k - 1].size() << ",";
            std::snprintf(buf, sizeof buf, "%.17g", hp);
            os << buf << ",";
            std::snprintf(buf, sizeof buf, "%.17g", ha);
            os << buf << "\n";
        }
    } else {
        std::cerr << "converge: system does not satisfy (Q)/(P)"
                  << (allow_s2 ? " or (S1)" : "; use --allow-s2 for (S1)/(S2) systems")
                  << "\n";
        return 2;
    }
    hutchinf::atomic_write_file(out, os.str());
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out) {
    auto results = hutchinf::run_suite(suite);
    json j;
    j["suite"] = suite;
    j["pass"] = hutchinf::all_passed(results);
    j["checks"] = json::array();
    for (const auto& r : results) {
        json c;
        c["name"] = r.name;
        c["pass"] = r.pass;
        if (!r.detail.empty()) c["detail"] = r.detail;
        j["checks"].push_back(c);
    }
    std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        hutchinf::atomic_write_file(out, text);
    return hutchinf::all_passed(results) ? 0 : 1;
}

int cmd_cantor(double K, double q, const std::string& ms_arg, int auto_ms,
               int depth, const std::string& out_dir, int resolution) {
    std::vector<int> ms;
    if (auto_ms > 0) {
        ms = hutchinf::minimal_fin4_sequence(auto_ms);
    } else if (!ms_arg.empty()) {
        std::stringstream ss(ms_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) ms.push_back(std::stoi(tok));
    } else {
        throw CLI::ValidationError("cantor", "need --ms or --auto-ms");
    }
    // geometry may need more terms than the certificate sweep
    std::vector<int> geo_ms = ms;
    while (static_cast<int>(geo_ms.size()) < depth + 2)
        geo_ms.push_back(geo_ms.back());
    hutchinf::CantorParams params = hutchinf::derive_params(K, q, geo_ms);

    auto sq = hutchinf::squares(params, depth);
    std::ostringstream csv;
    hutchinf::write_squares_csv(csv, sq);
    hutchinf::atomic_write_file(out_dir + "/squares.csv", csv.str());

    hutchinf::Viewport vp;
    vp.min = {0.0, 0.0};
    vp.max = {1.0, 1.0};
    vp.resolution = resolution;
    hutchinf::Image img = hutchinf::rasterize_squares(sq, vp);
    hutchinf::atomic_write_file(out_dir + "/squares.ppm",
                                hutchinf::encode_ppm(img));

    json report;
    report["ms"] = ms;
    int k_max = static_cast<int>(ms.size()) - 1;
    report["fin4"] = json::array();
    int first_fail = -1;
    if (k_max >= 1) {
        auto oks = hutchinf::check_fin4(ms, k_max);
        for (int k = 1; k <= k_max; ++k) {
            report["fin4"].push_back({{"k", k}, {"ok", static_cast<bool>(oks[k - 1])}});
            if (!oks[k - 1] && first_fail < 0) first_fail = k;
        }
    }
    if (first_fail >= 0) report["first_failing_k"] = first_fail;
    report["certificates"] = json::array();
    bool all_ok = first_fail < 0;
    for (int m = 1; m <= k_max; ++m)
        for (int k = m; k <= k_max; ++k) {
            auto cert = hutchinf::measure_certificate(ms, m, k);
            report["certificates"].push_back(
                {{"ms", ms},
                 {"m", m},
                 {"k", k},
                 {"r_k_exponent", cert.r_exponent.convert_to<long long>()},
                 {"tile_exponent", cert.tile_exponent.convert_to<long long>()},
                 {"ok", cert.ok}});
            if (!cert.ok) all_ok = false;
        }
    report["all_ok"] = all_ok;
    hutchinf::atomic_write_file(out_dir + "/certificate.json",
                                report.dump(2) + "\n");
    std::cout << "wrote " << out_dir << "/squares.csv, squares.ppm, certificate.json\n";
    return 0;
}

int cmd_attractor(const ExperimentConfig& cfg, const std::string& out_prefix) {
    hutchinf::AttractorApprox a = hutchinf::attractor(cfg.system, cfg.run.tol);
    std::ostringstream csv;
    hutchinf::write_cloud_csv(csv, a.cloud);
    hutchinf::atomic_write_file(out_prefix + ".csv", csv.str());
    json meta;
    meta["system"] = cfg.system.name;
    meta["err"] = a.err;
    meta["iterations"] = a.iterations;
    meta["prune_eps"] = a.prune_eps;
    meta["prefix_depth"] = a.prefix_depth;
    meta["points"] = a.cloud.size();
    hutchinf::atomic_write_file(out_prefix + ".json", meta.dump(2) + "\n");
    std::cout << "wrote " << out_prefix << ".csv and .json (err " << a.err
              << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attractors of generalized iterated function systems of infinite order"};
    app.require_subcommand(1);

    std::string config_path, system_name = "ex5", out, suite, ms_arg, out_dir = ".";
    int depth = 4, prefix = 8, resolution = 512, auto_ms = 0;
    double prune = 1e-3, tol = 0.05, K = 0.5, q = 0.5;
    std::uint64_t seed = 0;
    bool allow_s2 = false;
    app.add_option("--seed", seed, "seed for sampled diagnostics");

    CLI::App* render = app.add_subcommand("render", "rasterize generalized iterates");
    render->add_option("--config", config_path);
    render->add_option("--system", system_name);
    render->add_option("--depth", depth);
    render->add_option("--prune", prune);
    render->add_option("--prefix", prefix);
    render->add_option("--resolution", resolution);
    render->add_option("--out", out)->required();

    CLI::App* converge = app.add_subcommand("converge", "convergence table");
    converge->add_option("--config", config_path);
    converge->add_option("--system", system_name);
    converge->add_option("--depth", depth);
    converge->add_option("--prune", prune);
    converge->add_option("--prefix", prefix);
    converge->add_option("--tol", tol);
    converge->add_flag("--allow-s2", allow_s2);
    converge->add_option("--out", out)->required();

    CLI::App* verify = app.add_subcommand("verify", "run an invariant suite");
    verify->add_option("suite", suite, "metrics|hausdorff|shifts|tiles|conjugacy|cantor|all")
        ->required();
    verify->add_option("--out", out);

    CLI::App* cantor = app.add_subcommand("cantor", "planar Cantor construction");
    cantor->add_option("--K", K);
    cantor->add_option("--q", q);
    cantor->add_option("--ms", ms_arg, "comma-separated m sequence");
    cantor->add_option("--auto-ms", auto_ms, "derive the greedy sequence up to k");
    cantor->add_option("--depth", depth);
    cantor->add_option("--resolution", resolution);
    cantor->add_option("--out-dir", out_dir);

    CLI::App* attract = app.add_subcommand("attractor", "certified attractor cloud");
    attract->add_option("--config", config_path);
    attract->add_option("--system", system_name);
    attract->add_option("--tol", tol);
    attract->add_option("--out", out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed())
            return cmd_render(
                config_from(config_path, system_name, depth, prune, prefix, tol),
                out, render->count("--resolution") ? resolution : 0);
        if (converge->parsed())
            return cmd_converge(
                config_from(config_path, system_name, depth, prune, prefix, tol),
                out, allow_s2);
        if (verify->parsed()) return cmd_verify(suite, out);
        if (cantor->parsed()) {
            if (depth == 4 && !cantor->count("--depth")) depth = 3;
            return cmd_cantor(K, q, ms_arg, auto_ms, depth, out_dir, resolution);
        }
        if (attract->parsed())
            return cmd_attractor(
                config_from(config_path, system_name, depth, prune, prefix, tol),
                out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
