#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "covoter/config.hpp"
#include "covoter/experiments.hpp"
#include "covoter/graphon.hpp"
#include "covoter/io.hpp"
#include "covoter/pde.hpp"
#include "covoter/stats.hpp"

namespace {

using namespace covoter;
using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value configuration file");
    cmd->add_option("--set", args.overrides, "override one key=value (repeatable)");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--out", args.out_dir, "output directory");
}

Config load_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
    for (const std::string& kv : args.overrides) apply_override(cfg, kv);
    return cfg;
}

int cmd_simulate(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    Config cfg = load_config(args);
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 100));
    const double T = get_double(cfg, "T", 1.0);
    const double sample_dt = get_double(cfg, "sample_dt", 0.1);
    const int bins = static_cast<int>(get_int(cfg, "bins", 40));
    const std::string obs_name = get_string(cfg, "observable", "y");
    if (obs_name != "y" && obs_name != "type")
        throw config_error("observable must be y or type, got '" + obs_name + "'");
    const Observable obs = obs_name == "y" ? Observable::y : Observable::type;

    ensure_directory(args.out_dir);
    SimState state = init(params, n, opinion_law_from_config(cfg, n), y_law_from_config(cfg),
                          args.seed);

    FractionTrajectory traj;
    traj.n = n;
    traj.t.push_back(0.0);
    traj.frac_plus.push_back(static_cast<double>(state.n_plus) / n);
    RunHooks hooks;
    hooks.sample_dt = sample_dt;
    hooks.on_sample = [&](const SimState& s) {
        traj.t.push_back(s.t);
        traj.frac_plus.push_back(static_cast<double>(s.n_plus) / s.n());
    };
    run(state, T, hooks);
    write_fraction_csv(args.out_dir + "/fraction.csv", traj);

    const Snapshot snap = make_snapshot(state);
    const double p_hat = static_cast<double>(snap.n_plus()) / n;

    const Histogram hist = type_histogram(snap, bins, obs);
    double beta_a, beta_b;
    if (const auto* m1 = std::get_if<Model1Params>(&params)) {
        beta_a = m1->gamma_mp;
        beta_b = m1->gamma_pm;
    } else {
        const double beta = std::holds_alternative<Model2Params>(params)
                                ? std::get<Model2Params>(params).beta
                                : std::get<Model3Params>(params).beta;
        beta_a = beta * std::max(p_hat, 1e-12);
        beta_b = beta * std::max(1.0 - p_hat, 1e-12);
    }
    write_histogram_csv(args.out_dir + "/histogram.csv", hist, beta_a, beta_b);

    json summary;
    summary["n"] = n;
    summary["T"] = T;
    summary["seed"] = args.seed;
    summary["frac_plus"] = p_hat;
    summary["n_vertex_events"] = state.n_vertex_events;
    summary["n_edge_events"] = state.n_edge_events;
    const std::optional<double> tc = consensus_time(traj, get_double(cfg, "eps", 0.0));
    if (tc) summary["consensus_time"] = *tc;
    if (snap.graph) {
        write_graphon_pgm(args.out_dir + "/graphon.pgm", from_snapshot(snap),
                          static_cast<int>(get_int(cfg, "min_px", 512)));
        write_graphon_csv(args.out_dir + "/graphon.csv", from_snapshot(snap));
        const Polarisation pol = polarisation(snap);
        summary["edge_density"] =
            static_cast<double>(snap.graph->active_count()) / EdgeSet::pair_count(n);
        summary["disagree_density"] = pol.disagree_density;
        summary["disagree_share"] = pol.disagree_share;
        summary["min_degree"] = snap.graph->min_degree();
    }
    if (!snap.layers.empty()) {
        json layer_counts = json::array();
        for (const EdgeSet& l : snap.layers) layer_counts.push_back(l.active_count());
        summary["layer_active_counts"] = layer_counts;
    }
    summary["runtime_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(args.out_dir + "/summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_pde(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    Config cfg = load_config(args);
    const ModelParams params = params_from_config(cfg);

    PdeConfig pc;
    pc.M = static_cast<int>(get_int(cfg, "M", 200));
    pc.dt = get_double(cfg, "dt", 0.5 / pc.M);
    pc.T = get_double(cfg, "T", 1.0);
    pc.store_every = static_cast<int>(get_int(cfg, "store_every", 1));
    pc.validate();

    const std::string init_kind = get_string(cfg, "density_init", "uniform");
    DensityField f0(0.0, pc.M);
    if (init_kind == "uniform") {
        const double p_plus = get_double(cfg, "p_plus", 0.5);
        require_config(p_plus >= 0.0 && p_plus <= 1.0, "p_plus must lie in [0,1]");
        for (int i = 0; i <= pc.M; ++i) {
            f0.f_plus[i] = p_plus;
            f0.f_minus[i] = 1.0 - p_plus;
        }
    } else if (init_kind == "stationary") {
        if (const auto* m1 = std::get_if<Model1Params>(&params)) {
            f0 = stationary_model1(*m1, pc.M);
        } else if (const auto* m2 = std::get_if<Model2Params>(&params)) {
            f0 = stationary_model2(m2->beta, get_double(cfg, "p_plus", 0.5), pc.M);
        } else {
            throw config_error("density_init=stationary supports models 1 and 2 only");
        }
    } else {
        throw config_error("density_init must be uniform or stationary, got '" + init_kind +
                           "'");
    }

    DensityTrajectory traj = [&] {
        if (const auto* m1 = std::get_if<Model1Params>(&params)) return solve_model1(f0, *m1, pc);
        if (const auto* m2 = std::get_if<Model2Params>(&params)) return solve_model2(f0, *m2, pc);
        return solve_model3(f0, std::get<Model3Params>(params), pc);
    }();

    ensure_directory(args.out_dir);
    write_density_csv(args.out_dir + "/density.csv", traj);

    const DensityField& last = traj.slices().back();
    double drift = 0.0, mass_err = 0.0;
    for (int i = 0; i <= pc.M; ++i)
        drift += last.weight(i) * (std::abs(last.f_plus[i] - f0.f_plus[i]) +
                                   std::abs(last.f_minus[i] - f0.f_minus[i]));
    for (const DensityField& s : traj.slices())
        mass_err = std::max(mass_err, std::abs(s.total_mass() - 1.0));

    json summary;
    summary["M"] = pc.M;
    summary["dt"] = pc.dt;
    summary["T"] = pc.T;
    summary["slices"] = traj.slices().size();
    summary["final_mass_plus"] = last.mass_plus();
    summary["final_mass_minus"] = last.mass_minus();
    summary["max_mass_error"] = mass_err;
    summary["l1_drift_from_initial"] = drift;
    summary["runtime_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(args.out_dir + "/summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_graphon(const CommonArgs& args) {
    Config cfg = load_config(args);
    const std::string path_a = get_string(cfg, "graphon_a");
    const std::string path_b = get_string(cfg, "graphon_b");
    const StepGraphon a = read_graphon_csv(path_a);
    const StepGraphon b = read_graphon_csv(path_b);
    const StepGraphon d = difference(a, b);

    json out;
    out["graphon_a"] = path_a;
    out["graphon_b"] = path_b;
    out["l1"] = l1_distance(a, b);
    if (d.k() <= 22) {
        out["cut_norm"] = cut_norm_exact(d);
        out["cut_norm_kind"] = "exact";
    } else {
        const int restarts = static_cast<int>(get_int(cfg, "restarts", 50));
        out["cut_norm"] = cut_norm_lower_bound(d, restarts, args.seed);
        out["cut_norm_kind"] = "lower_bound";
        out["restarts"] = restarts;
    }
    ensure_directory(args.out_dir);
    write_text_file(args.out_dir + "/distances.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const CommonArgs& args, const std::string& name) {
    const std::vector<std::string>& names = experiment_registry();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::cerr << "error: unknown experiment '" << name << "'; available:";
        for (const std::string& n : names) std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
    }
    const Verdict v = run_experiment(name, load_config(args), args.seed, args.out_dir);
    std::cout << verdict_json(v);
    return v.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-evolutionary voter models: simulation, densities, graphon analysis"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string experiment_name;

    CLI::App* sim = app.add_subcommand("simulate", "run one event-driven realization");
    add_common(sim, args);

    CLI::App* pde = app.add_subcommand("pde", "solve the density transport system");
    add_common(pde, args);

    CLI::App* gra = app.add_subcommand("graphon", "distances between two step graphons");
    add_common(gra, args);

    CLI::App* exp = app.add_subcommand("experiment", "run a preregistered experiment");
    exp->add_option("--name", experiment_name, "experiment name")->required();
    add_common(exp, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (pde->parsed()) return cmd_pde(args);
        if (gra->parsed()) return cmd_graphon(args);
        return cmd_experiment(args, experiment_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
