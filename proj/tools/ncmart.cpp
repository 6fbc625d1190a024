#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ncmart/harness.hpp"

using namespace ncmart;
using nlohmann::json;

namespace {

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    json j;
    f >> j;
    return ExperimentConfig::from_json(j);
}

int run(int argc, char** argv) {
    CLI::App app{"ncmart: martingale decomposition laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int trials = -1, dim = 0, depth = 0;
    bool emit_matrices = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed,-S", seed, "RNG seed override");
    app.add_option("--trials,-K", trials, "trial count override");
    app.add_option("--dim,-N", dim, "dimension override");
    app.add_option("--depth,-T", depth, "filtration depth override");
    app.add_flag("--emit-matrices", emit_matrices, "include matrices in decompose output");

    auto* verify = app.add_subcommand("verify", "run the full inequality suite");
    auto* decomp = app.add_subcommand("decompose", "decompose one sampled martingale");
    auto* bg = app.add_subcommand("bg-sweep", "Burkholder-Gundy constant sweep");
    auto* llogl = app.add_subcommand("llogl", "H^1 vs LlogL comparison");
    auto* c0 = app.add_subcommand("c0", "evaluate the theoretical constant C0");
    auto* calib = app.add_subcommand("calibrate", "freeze calibration baselines");
    // Shared options live on the parent; let "ncmart verify --config ..." find
    // them after the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    ExperimentConfig config = load_config(config_path);
    if (seed_opt->count()) config.seed = seed;
    if (trials >= 0) config.trials = trials;
    if (dim > 0) config.dim = dim;
    if (depth > 0) config.depth = depth;
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.validate();
    std::filesystem::create_directories(config.out_dir);

    if (c0->parsed()) {
        C0Result r = theoretical_constant_c0();
        json out{{"c0", r.c0},
                 {"alpha", r.alpha},
                 {"beta", r.beta},
                 {"k1_at_argmin", k1_constant(r.alpha, r.beta)},
                 {"theorem_constant_k", 32.0 * r.c0}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (calib->parsed()) {
        CalibrationBaseline b = calibrate(config);
        const std::string path = config.out_dir + "/calibration.json";
        b.save(path);
        std::cout << "baseline written to " << path << "\n"
                  << b.to_json().dump(2) << "\n";
        return 0;
    }

    if (decomp->parsed()) {
        Filtration f = config_filtration(config);
        MartingaleSequence x = draw_trial_martingale(config, f, 0);
        DecompositionResult res = decompose(x, config.tol);
        TheoremReport tr = verify_theorem31(res, x, config.tol);
        json out{{"diff_residual", tr.diff_residual},
                 {"reconstruction", tr.reconstruction},
                 {"l2_value", tr.l2_value},
                 {"l2_bound", tr.l2_bound},
                 {"l2_ratio", tr.l2_ratio},
                 {"weak_value", tr.weak_value},
                 {"weak_bound", tr.weak_bound},
                 {"weak_ratio", tr.weak_ratio},
                 {"lemma34_residual", tr.lemma34_residual}};
        if (emit_matrices) {
            json ys = json::array(), zs = json::array();
            for (const auto& t : res.y.terms) ys.push_back(operator_to_json(t));
            for (const auto& t : res.z.terms) zs.push_back(operator_to_json(t));
            out["y"] = ys;
            out["z"] = zs;
        }
        std::ofstream of(config.out_dir + "/decomposition.json", std::ios::binary);
        of << out.dump(2) << "\n";
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    ExperimentReport rep;
    if (verify->parsed())
        rep = run_verification_suite(config);
    else if (bg->parsed())
        rep = bg_constant_sweep(config);
    else if (llogl->parsed())
        rep = llogl_check(config);
    rep.write(config.out_dir);
    std::cout << rep.summary_json().dump(2) << "\n";
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return 3;
    }
}
