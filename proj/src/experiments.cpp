#include "covoter/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "covoter/graphon.hpp"
#include "covoter/io.hpp"
#include "covoter/kernels.hpp"
#include "covoter/pde.hpp"
#include "covoter/stats.hpp"

namespace covoter {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

/** L1 distance between two density fields on the same grid (both branches). */
double field_l1(const DensityField& a, const DensityField& b) {
    require(a.M == b.M, "field_l1: grid mismatch");
    double s = 0.0;
    for (int i = 0; i <= a.M; ++i)
        s += a.weight(i) * (std::abs(a.f_plus[i] - b.f_plus[i]) +
                            std::abs(a.f_minus[i] - b.f_minus[i]));
    return s;
}

/** Uniform t=0 field with Plus mass p (both branches constant). */
DensityField uniform_field(int M, double p_plus) {
    DensityField f(0.0, M);
    for (int i = 0; i <= M; ++i) {
        f.f_plus[i] = p_plus;
        f.f_minus[i] = 1.0 - p_plus;
    }
    return f;
}

/** All-Plus t=0 field (types uniform): f_+ = 1, f_- = 0. */
DensityField all_plus_field(int M) { return uniform_field(M, 1.0); }

FractionTrajectory run_tracked(SimState& state, double until, double sample_dt) {
    FractionTrajectory traj;
    traj.n = state.n();
    traj.t.push_back(state.t);
    traj.frac_plus.push_back(static_cast<double>(state.n_plus) / state.n());
    RunHooks hooks;
    hooks.sample_dt = sample_dt;
    hooks.on_sample = [&](const SimState& s) {
        traj.t.push_back(s.t);
        traj.frac_plus.push_back(static_cast<double>(s.n_plus) / s.n());
    };
    run(state, until, hooks);
    return traj;
}

/** Shared body of the graphon figure experiments: run one realization
 *  through the snapshot times, compare each empirical graphon against the
 *  solved reference, write PGM/CSV outputs, and return the T -> l1 map. */
struct GraphonFigureResult {
    double l1_last = 0.0;
    double cut_lb_last = 0.0;
};

GraphonFigureResult graphon_figure(const ModelParams& params, int n,
                                   const std::vector<double>& times,
                                   const DensityTrajectory& pde, int grid_k,
                                   OpinionLaw olaw, YLaw ylaw, uint64_t seed,
                                   const std::string& out_dir) {
    SimState state = init(params, n, olaw, ylaw, seed);
    GraphonFigureResult res;
    std::string rows = "T,l1,cut_lower_bound\n";
    for (double t : times) {
        run(state, t);
        const Snapshot snap = make_snapshot(state);
        const StepGraphon emp = from_snapshot(snap);
        const StepGraphon ref = reference(t, pde.at(t), params, grid_k);
        const double l1 = l1_distance(emp, ref);
        const double lb = cut_norm_lower_bound(difference(emp, ref), 12, seed);
        res.l1_last = l1;
        res.cut_lb_last = lb;
        const std::string tag = fmt(t);
        write_graphon_pgm(out_dir + "/empirical_T" + tag + ".pgm", emp);
        write_graphon_pgm(out_dir + "/reference_T" + tag + ".pgm", ref);
        write_graphon_csv(out_dir + "/empirical_T" + tag + ".csv", emp);
        rows += tag + "," + fmt(l1) + "," + fmt(lb) + "\n";
    }
    write_text_file(out_dir + "/distances.csv", rows);
    return res;
}

Verdict descriptive(const std::string& metric, double value, const std::string& note) {
    Verdict v;
    v.metric = metric;
    v.value = value;
    v.threshold = 1.0;
    v.pass = value <= v.threshold;
    v.note = note.empty()
                 ? "figure reproduction; the threshold is the trivial bound of the metric"
                 : note;
    return v;
}

// ---------------------------------------------------------------- figures

Verdict exp_fig1(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 100));
    const int grid_k = static_cast<int>(get_int(cfg, "grid_k", 100));
    const int M = static_cast<int>(get_int(cfg, "M", 400));
    PdeConfig pc{M, 0.5 / M, 1.5, 10};
    const DensityTrajectory pde = solve_model1(all_plus_field(M),
                                               std::get<Model1Params>(params), pc);
    const auto res = graphon_figure(params, n, {0.5, 1.0, 1.5}, pde, grid_k,
                                    OpinionLaw::all_plus(), YLaw::uniform(), seed, out);
    return descriptive("l1_distance(T=1.5)", res.l1_last, "");
}

Verdict exp_fig2(Config& cfg, uint64_t seed, const std::string& out) {
    const int n = static_cast<int>(get_int(cfg, "n", 6000));
    const double T = get_double(cfg, "T", 50.0);
    const int bins = static_cast<int>(get_int(cfg, "bins", 40));
    const double pairs[3][2] = {{1.0, 1.5}, {2.0, 3.0}, {0.5, 0.5}};  // (gamma_mp, gamma_pm)
    double worst = 0.0;
    std::string rows = "gamma_mp,gamma_pm,beta_l1\n";
    for (int k = 0; k < 3; ++k) {
        Model1Params p;
        p.gamma_mp = pairs[k][0];
        p.gamma_pm = pairs[k][1];
        SimState state = init(p, n, OpinionLaw::all_plus(), YLaw::uniform(), seed + k,
                              /*vertex_only=*/true);
        run(state, T);
        const Snapshot snap = make_snapshot(state);
        const Histogram h = type_histogram(snap, bins, Observable::y);
        const double d = beta_l1(h, p.gamma_mp, p.gamma_pm);
        worst = std::max(worst, d);
        const std::string tag = fmt(p.gamma_mp) + "_" + fmt(p.gamma_pm);
        write_histogram_csv(out + "/hist_" + tag + ".csv", h, p.gamma_mp, p.gamma_pm);
        rows += fmt(p.gamma_mp) + "," + fmt(p.gamma_pm) + "," + fmt(d) + "\n";
    }
    write_text_file(out + "/beta_l1.csv", rows);
    Verdict v;
    v.metric = "max beta_l1 over the three rate pairs";
    v.value = worst;
    v.threshold = 0.1;
    v.pass = worst < v.threshold;
    return v;
}

Verdict exp_fig3(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 100));
    const int grid_k = static_cast<int>(get_int(cfg, "grid_k", 100));
    const int M = static_cast<int>(get_int(cfg, "M", 200));
    PdeConfig pc{M, 0.5 / M, 3.0, 10};
    const DensityTrajectory pde = solve_model2(uniform_field(M, 0.5),
                                               std::get<Model2Params>(params), pc);
    const auto res = graphon_figure(params, n, {1.0, 2.0, 3.0}, pde, grid_k,
                                    OpinionLaw::bernoulli(0.5), YLaw::uniform(), seed, out);
    return descriptive("l1_distance(T=3)", res.l1_last, "");
}

Verdict exp_fig4(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const Model2Params& m2 = std::get<Model2Params>(params);
    const int n = static_cast<int>(get_int(cfg, "n", 100));
    const double horizon = get_double(cfg, "T", 30.0);
    const int grid_k = static_cast<int>(get_int(cfg, "grid_k", 100));

    SimState state = init(params, n, OpinionLaw::bernoulli(0.5), YLaw::uniform(), seed);
    const double p_hat0 = static_cast<double>(state.n_plus) / n;
    const FractionTrajectory traj = run_tracked(state, horizon, 0.25);
    write_fraction_csv(out + "/fraction.csv", traj);
    const std::optional<double> tc = consensus_time(traj, 0.0);

    // deterministic counterpart from the realized initial Plus mass
    const int M = static_cast<int>(get_int(cfg, "M", 200));
    PdeConfig pc{M, 0.5 / M, 18.0, 20};
    const DensityTrajectory pde = solve_model2(uniform_field(M, p_hat0), m2, pc);
    double mass_minus_end = 0.0;
    for (double t : {6.0, 12.0, 18.0}) {
        const DensityField slice = pde.at(t);
        mass_minus_end = slice.mass_minus();
        write_graphon_pgm(out + "/reference_T" + fmt(t) + ".pgm",
                          reference(t, slice, params, grid_k));
    }

    Verdict v;
    v.metric = "consensus time (eps=0)";
    v.value = tc.value_or(-1.0);
    v.threshold = horizon;
    v.pass = tc.has_value() && *tc <= horizon;
    v.note = "deterministic run started from the realized initial Plus fraction " +
             fmt(p_hat0) + "; its Minus mass at T=18 is " + fmt(mass_minus_end);
    return v;
}

/** Shared body of the type-histogram Beta checks for the copy models. */
Verdict beta_histogram_check(const ModelParams& params, double beta, int n,
                             const std::vector<double>& times, int bins, uint64_t seed,
                             const std::string& out) {
    SimState state = init(params, n, OpinionLaw::bernoulli(0.5), YLaw::uniform(), seed);
    double dist = 0.0, p_hat = 0.5;
    bool consensus = false;
    for (double t : times) {
        run(state, t);
        const Snapshot snap = make_snapshot(state);
        p_hat = static_cast<double>(snap.n_plus()) / n;
        consensus = p_hat <= 0.0 || p_hat >= 1.0;
        const Histogram h = type_histogram(snap, bins, Observable::y);
        if (!consensus) {
            dist = beta_l1(h, beta * p_hat, beta * (1.0 - p_hat));
            write_histogram_csv(out + "/hist_T" + fmt(t) + ".csv", h, beta * p_hat,
                                beta * (1.0 - p_hat));
        }
    }
    Verdict v;
    v.metric = "beta_l1 at the final time against Beta(beta*p, beta*(1-p)), p measured";
    v.value = consensus ? 2.0 : dist;
    v.threshold = 0.15;
    v.pass = !consensus && dist < v.threshold;
    v.note = consensus ? "run reached consensus; the Beta fixed point does not apply"
                       : "measured Plus fraction " + fmt(p_hat);
    return v;
}

Verdict exp_fig5(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 600));
    const int bins = static_cast<int>(get_int(cfg, "bins", 20));
    return beta_histogram_check(params, std::get<Model2Params>(params).beta, n,
                                {3.0, 6.0, 9.0}, bins, seed, out);
}

Verdict exp_fig6(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 100));
    SimState state = init(params, n, OpinionLaw::first_k_plus(n / 2), YLaw::uniform(), seed);
    std::string rows = "T,disagree_density,disagree_share,frac_plus\n";
    double share = 0.0;
    for (double t : {1.0, 2.0, 3.0}) {
        run(state, t);
        const Snapshot snap = make_snapshot(state);
        write_graphon_pgm(out + "/empirical_T" + fmt(t) + ".pgm", from_snapshot(snap));
        const Polarisation pol = polarisation(snap);
        share = pol.disagree_share;
        rows += fmt(t) + "," + fmt(pol.disagree_density) + "," + fmt(pol.disagree_share) +
                "," + fmt(static_cast<double>(snap.n_plus()) / n) + "\n";
    }
    write_text_file(out + "/polarisation.csv", rows);
    return descriptive(
        "disagreeing share of active edges at T=3", share,
        "sharpened edge rule starves disagreeing pairs; no closed-form reference exists, "
        "so the outputs are the deliverable");
}

Verdict exp_fig_model3(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const Model3Params& m3 = std::get<Model3Params>(params);
    const int n = static_cast<int>(get_int(cfg, "n", 150));
    const int grid_k = static_cast<int>(get_int(cfg, "grid_k", 150));
    const int M = static_cast<int>(get_int(cfg, "M", 200));
    PdeConfig pc{M, 0.5 / M, 4.0, 10};
    const DensityTrajectory pde = solve_model3(uniform_field(M, 0.5), m3, pc);

    SimState state = init(params, n, OpinionLaw::bernoulli(0.5), YLaw::uniform(), seed);
    std::string rows = "T,l1,disagree_density,disagree_share\n";
    double l1_last = 0.0;
    for (double t : {2.0, 3.0, 4.0}) {
        run(state, t);
        const Snapshot snap = make_snapshot(state);
        const StepGraphon emp = from_snapshot(snap);
        const StepGraphon ref = reference(t, pde.at(t), params, grid_k);
        l1_last = l1_distance(emp, ref);
        const Polarisation pol = polarisation(snap);
        write_graphon_pgm(out + "/empirical_T" + fmt(t) + ".pgm", emp);
        write_graphon_pgm(out + "/reference_T" + fmt(t) + ".pgm", ref);
        rows += fmt(t) + "," + fmt(l1_last) + "," + fmt(pol.disagree_density) + "," +
                fmt(pol.disagree_share) + "\n";
    }
    write_text_file(out + "/distances.csv", rows);
    return descriptive("l1_distance(T=4), q=" + std::to_string(m3.q), l1_last, "");
}

// ---------------------------------------------------------------- checks

Verdict exp_beta_m1(Config& cfg, uint64_t seed, const std::string& out) {
    Model1Params p;
    p.gamma_mp = get_double(cfg, "gamma_mp", 1.0);
    p.gamma_pm = get_double(cfg, "gamma_pm", 1.5);
    const int n = static_cast<int>(get_int(cfg, "n", 6000));
    const double T = get_double(cfg, "T", 50.0);
    const int bins = static_cast<int>(get_int(cfg, "bins", 40));
    SimState state = init(p, n, OpinionLaw::all_plus(), YLaw::uniform(), seed,
                          /*vertex_only=*/true);
    run(state, T);
    const Histogram h = type_histogram(make_snapshot(state), bins, Observable::y);
    write_histogram_csv(out + "/hist.csv", h, p.gamma_mp, p.gamma_pm);
    Verdict v;
    v.metric = "beta_l1 against Beta(gamma_mp, gamma_pm)";
    v.value = beta_l1(h, p.gamma_mp, p.gamma_pm);
    v.threshold = 0.1;
    v.pass = v.value < v.threshold;
    return v;
}

Verdict exp_beta_m2(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 600));
    const double T = get_double(cfg, "T", 9.0);
    const int bins = static_cast<int>(get_int(cfg, "bins", 20));
    return beta_histogram_check(params, std::get<Model2Params>(params).beta, n, {T}, bins,
                                seed, out);
}

Verdict exp_beta_m3(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const int n = static_cast<int>(get_int(cfg, "n", 600));
    const int bins = static_cast<int>(get_int(cfg, "bins", 20));
    return beta_histogram_check(params, std::get<Model3Params>(params).beta, n,
                                {3.0, 4.0, 5.0}, bins, seed, out);
}

Verdict exp_coupling(Config& cfg, uint64_t seed, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const Model2Params& m2 = std::get<Model2Params>(params);
    const double T = get_double(cfg, "T", 3.0);
    const int n_seeds = static_cast<int>(get_int(cfg, "restarts", 20));
    const int M = static_cast<int>(get_int(cfg, "M", 200));
    const std::vector<int> sizes = {100, 200, 400};

    PdeConfig pc{M, 0.5 / M, T, 10};
    const DensityTrajectory pde = solve_model2(uniform_field(M, 0.5), m2, pc);

    std::string rows = "n,mean_dv_over_n,mean_de_over_n2\n";
    std::vector<double> dv_norm, de_norm;
    for (int n : sizes) {
        double dv = 0.0, de = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            const CouplingTrace trace =
                run_coupled(params, n, T, 0.5, seed + s, pde, OpinionLaw::bernoulli(0.5),
                            YLaw::uniform());
            dv += trace.d_v.back();
            de += trace.d_e.back();
            if (s == 0) write_coupling_csv(out + "/trace_n" + std::to_string(n) + ".csv", trace);
        }
        dv_norm.push_back(dv / n_seeds / n);
        de_norm.push_back(de / n_seeds / (static_cast<double>(n) * n));
        rows += std::to_string(n) + "," + fmt(dv_norm.back()) + "," + fmt(de_norm.back()) + "\n";
    }
    write_text_file(out + "/coupling.csv", rows);

    double worst = -1.0;
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        worst = std::max(worst, dv_norm[k] - dv_norm[k - 1]);
        worst = std::max(worst, de_norm[k] - de_norm[k - 1]);
    }
    Verdict v;
    v.metric = "max consecutive increase of mean d_V/n and d_E/n^2 across n=100,200,400";
    v.value = worst;
    v.threshold = 0.0;
    v.pass = worst < 0.0;
    v.note = "both normalized disagreement curves must strictly decrease in n";
    return v;
}

Verdict exp_expm_check(Config& cfg, uint64_t, const std::string& out) {
    (void)cfg;
    double worst = 0.0;
    std::string rows = "gamma_pm,gamma_mp,t,max_abs_diff\n";
    for (double gpm : {0.5, 1.0, 1.5})
        for (double gmp : {0.5, 1.0, 1.5}) {
            Model1Params p;
            p.gamma_pm = gpm;
            p.gamma_mp = gmp;
            const Matrix2 nm = rate_matrix(p);
            for (int k = 0; k <= 10; ++k) {
                const double t = 0.5 * k;
                const double d = expm_n(t, p).max_abs_diff(expm_taylor(nm, t));
                worst = std::max(worst, d);
                rows += fmt(gpm) + "," + fmt(gmp) + "," + fmt(t) + "," + fmt(d) + "\n";
            }
        }
    write_text_file(out + "/expm.csv", rows);
    Verdict v;
    v.metric = "max |closed form - Taylor reference| over the t x rate grid";
    v.value = worst;
    v.threshold = 1e-10;
    v.pass = worst < v.threshold;
    return v;
}

Verdict exp_stationary_check(Config& cfg, uint64_t, const std::string& out) {
    const ModelParams params = params_from_config(cfg);
    const Model1Params& p = std::get<Model1Params>(params);
    const int M = static_cast<int>(get_int(cfg, "M", 1024));
    const DensityField f0 = stationary_model1(p, M);
    PdeConfig pc{M, 1.0 / M, 10.0, 64};
    const DensityTrajectory traj = solve_model1(f0, p, pc);
    const double drift = field_l1(traj.at(1.0), f0);
    double mass_err = 0.0;
    for (const DensityField& s : traj.slices())
        mass_err = std::max(mass_err, std::abs(s.total_mass() - 1.0));
    write_density_csv(out + "/density.csv", traj);
    Verdict v;
    v.metric = "L1 drift of the stationary density over one time unit, M=" + std::to_string(M);
    v.value = drift;
    v.threshold = 5.0 / M;
    v.pass = drift < v.threshold && mass_err < 1e-6;
    v.note = "max |mass - 1| over ten time units: " + fmt(mass_err) + " (must stay below 1e-6)";
    return v;
}

Verdict exp_cutnorm_check(Config& cfg, uint64_t seed, const std::string& out) {
    const int instances = static_cast<int>(get_int(cfg, "restarts", 100));
    const RngStream rng(seed);
    double worst = 0.0;
    bool bound_ok = true, l1_ok = true;
    for (int inst = 0; inst < instances; ++inst) {
        RngSequence seq(rng, RngKind::sample, static_cast<uint64_t>(inst));
        // random signed difference of two graphons on a shared 8-block grid
        StepGraphon d(8, 0.0);
        for (int b = 1; b < 8; ++b) d.boundaries[b] = d.boundaries[b - 1] +
            (1.0 - d.boundaries[b - 1]) * (0.2 + 0.6 * seq.u01()) / (8 - b + 1);
        for (int i = 0; i < 8; ++i)
            for (int j = i; j < 8; ++j) d.set_value(i, j, 2.0 * seq.u01() - 1.0);

        const double exact = cut_norm_exact(d);
        // independent brute force over both subset families
        std::vector<double> a(64);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) a[i * 8 + j] = d.width(i) * d.width(j) * d.value(i, j);
        double brute = 0.0;
        for (uint32_t s = 0; s < 256; ++s) {
            double col[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            for (int i = 0; i < 8; ++i)
                if ((s >> i) & 1u)
                    for (int j = 0; j < 8; ++j) col[j] += a[i * 8 + j];
            for (uint32_t tset = 0; tset < 256; ++tset) {
                double sum = 0.0;
                for (int j = 0; j < 8; ++j)
                    if ((tset >> j) & 1u) sum += col[j];
                brute = std::max(brute, std::abs(sum));
            }
        }
        worst = std::max(worst, std::abs(exact - brute));

        const double lb = cut_norm_lower_bound(d, 16, seed + inst);
        bound_ok = bound_ok && lb <= exact + 1e-12;

        // split d into two genuine graphons and check cut <= L1
        StepGraphon ga = d, gb = d;
        for (std::size_t k = 0; k < d.values.size(); ++k) {
            ga.values[k] = std::max(d.values[k], 0.0);
            gb.values[k] = std::max(-d.values[k], 0.0);
        }
        l1_ok = l1_ok && cut_norm_exact(difference(ga, gb)) <= l1_distance(ga, gb) + 1e-12;
    }
    write_text_file(out + "/cutnorm.txt",
                    "instances=" + std::to_string(instances) + "\nmax_error=" + fmt(worst) +
                        "\nlower_bound_ok=" + (bound_ok ? "1" : "0") +
                        "\ncut_le_l1_ok=" + (l1_ok ? "1" : "0") + "\n");
    Verdict v;
    v.metric = "max |enumerated - brute force| over random 8-block differences";
    v.value = worst;
    v.threshold = 1e-12;
    v.pass = worst <= v.threshold && bound_ok && l1_ok;
    v.note = std::string("also requires lower_bound <= exact (") + (bound_ok ? "ok" : "VIOLATED") +
             ") and cut norm <= L1 (" + (l1_ok ? "ok" : "VIOLATED") + ")";
    return v;
}

// ---------------------------------------------------------------- registry

struct Entry {
    const char* name;
    Config defaults;
    std::function<Verdict(Config&, uint64_t, const std::string&)> fn;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        {"fig1",
         {{"model", "1"}, {"gamma_pm", "1.5"}, {"gamma_mp", "1"}, {"pi_p", "0.9"},
          {"pi_m", "0.1"}, {"p0", "0.05"}, {"n", "100"}},
         exp_fig1},
        {"fig2", {{"n", "6000"}, {"T", "50"}, {"bins", "40"}}, exp_fig2},
        {"fig3",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.9"}, {"pi_m", "0.1"},
          {"p0", "0.05"}, {"n", "100"}},
         exp_fig3},
        {"fig4",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.9"}, {"pi_m", "0.1"},
          {"p0", "0.05"}, {"n", "100"}, {"T", "30"}},
         exp_fig4},
        {"fig5",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.6"}, {"pi_m", "0.6"},
          {"p0", "0.05"}, {"n", "600"}, {"bins", "20"}},
         exp_fig5},
        {"fig6",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.9"}, {"pi_m", "0.7"},
          {"p0", "0.05"}, {"q_exp", "12"}, {"n", "100"}},
         exp_fig6},
        {"fig7", {{"model", "3"}, {"q", "1"}, {"n", "150"}}, exp_fig_model3},
        {"fig8", {{"model", "3"}, {"q", "2"}, {"n", "150"}}, exp_fig_model3},
        {"fig9", {{"model", "3"}, {"q", "3"}, {"n", "150"}}, exp_fig_model3},
        {"beta-m1",
         {{"gamma_mp", "1"}, {"gamma_pm", "1.5"}, {"n", "6000"}, {"T", "50"}, {"bins", "40"}},
         exp_beta_m1},
        {"beta-m2",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.6"}, {"pi_m", "0.6"},
          {"p0", "0.05"}, {"n", "600"}, {"T", "9"}, {"bins", "20"}},
         exp_beta_m2},
        {"beta-m3",
         {{"model", "3"}, {"q", "1"}, {"beta", "0.5"}, {"pi_p_g", "0.7"}, {"pi_m_g", "0.7"},
          {"pi_p_r", "0.3"}, {"pi_m_r", "0.3"}, {"p0", "0.05"}, {"n", "600"}, {"bins", "20"}},
         exp_beta_m3},
        {"coupling",
         {{"model", "2"}, {"beta", "0.66"}, {"pi_p", "0.9"}, {"pi_m", "0.1"},
          {"p0", "0.05"}, {"T", "3"}, {"restarts", "20"}},
         exp_coupling},
        {"expm-check", {}, exp_expm_check},
        {"stationary-check",
         {{"model", "1"}, {"gamma_pm", "1.5"}, {"gamma_mp", "1"}, {"M", "1024"}},
         exp_stationary_check},
        {"cutnorm-check", {{"restarts", "100"}}, exp_cutnorm_check},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& experiment_registry() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Entry& e : entries()) out.push_back(e.name);
        return out;
    }();
    return names;
}

Verdict run_experiment(const std::string& name, const Config& overrides, uint64_t seed,
                       const std::string& out_dir) {
    const Entry* entry = nullptr;
    for (const Entry& e : entries())
        if (name == e.name) entry = &e;
    if (!entry) {
        std::string msg = "unknown experiment '" + name + "'; available:";
        for (const std::string& n : experiment_registry()) msg += " " + n;
        throw config_error(msg);
    }
    ensure_directory(out_dir);
    Config cfg = entry->defaults;
    for (const auto& [k, v] : overrides) cfg[k] = v;

    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = entry->fn(cfg, seed, out_dir);
    v.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.name = name;
    v.config = cfg;
    v.config["seed"] = std::to_string(seed);
    write_text_file(out_dir + "/verdict.json", verdict_json(v));
    return v;
}

std::string verdict_json(const Verdict& v) {
    nlohmann::json j;
    j["name"] = v.name;
    nlohmann::json jc = nlohmann::json::object();
    for (const auto& [k, val] : v.config) jc[k] = val;
    j["config"] = jc;
    j["metric"] = v.metric;
    j["value"] = v.value;
    j["threshold"] = v.threshold;
    j["pass"] = v.pass;
    j["runtime_s"] = v.runtime_s;
    if (!v.note.empty()) j["note"] = v.note;
    return j.dump(2) + "\n";
}

}  // namespace covoter
