#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "covoter/pde.hpp"
#include "covoter/simulator.hpp"
#include "covoter/stats.hpp"

using namespace covoter;

namespace {

bool snapshots_equal(const Snapshot& a, const Snapshot& b) {
    if (a.t != b.t || a.opinions != b.opinions || a.y != b.y || a.y0 != b.y0)
        return false;
    if (a.graph.has_value() != b.graph.has_value()) return false;
    if (a.graph && EdgeSet::disagreement(*a.graph, *b.graph) != 0) return false;
    return true;
}

DensityTrajectory constant_trajectory(double p_plus, double t1, int M = 64) {
    DensityField f0(0.0, M), f1(t1, M);
    for (int i = 0; i <= M; ++i) {
        f0.f_plus[i] = f1.f_plus[i] = p_plus;
        f0.f_minus[i] = f1.f_minus[i] = 1.0 - p_plus;
    }
    return DensityTrajectory({f0, f1});
}

}  // namespace

TEST_CASE("initial opinion and y laws") {
    const Model2Params m2;

    SUBCASE("deterministic laws") {
        SimState s = init(m2, 10, OpinionLaw::all_plus(), YLaw::constant(0.7), 1);
        CHECK(s.n_plus == 10);
        for (const VertexState& v : s.vertices) {
            CHECK(v.opinion == Opinion::Plus);
            CHECK(v.y == 0.7);
            CHECK(v.y0 == 0.7);
        }

        SimState k = init(m2, 10, OpinionLaw::first_k_plus(3), YLaw::zero(), 1);
        CHECK(k.n_plus == 3);
        for (int i = 0; i < 10; ++i) {
            CHECK(k.vertices[i].opinion == (i < 3 ? Opinion::Plus : Opinion::Minus));
            CHECK(k.vertices[i].y == 0.0);
        }
    }

    SUBCASE("sampled laws hit their moments") {
        const int n = 4000;
        SimState s = init(m2, n, OpinionLaw::bernoulli(0.3), YLaw::uniform(), 7);
        // 3 sigma around the Binomial(n, 0.3) mean
        CHECK(std::abs(s.n_plus - 1200.0) < 3.0 * std::sqrt(n * 0.3 * 0.7));
        double mean = 0.0;
        for (const VertexState& v : s.vertices) {
            CHECK(v.y >= 0.0);
            CHECK(v.y <= 1.0);
            mean += v.y;
        }
        mean /= n;
        CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * n));
    }

    SUBCASE("edge layer is Bernoulli(p0) over pairs") {
        Model2Params p = m2;
        p.p0 = 0.05;
        SimState s = init(p, 200, OpinionLaw::bernoulli(0.5), YLaw::zero(), 11);
        REQUIRE(s.layers.size() == 1);
        const double expect = 19900 * 0.05;
        CHECK(std::abs(s.layers[0].active_count() - expect) <
              3.0 * std::sqrt(19900 * 0.05 * 0.95));
    }

    SUBCASE("vertex-only states exist for the flip model alone") {
        const Model1Params m1;
        SimState s = init(m1, 50, OpinionLaw::all_plus(), YLaw::zero(), 1, true);
        CHECK(s.vertex_only());
        CHECK_THROWS_AS(init(m2, 50, OpinionLaw::all_plus(), YLaw::zero(), 1, true),
                        contract_error);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(init(m2, 1, OpinionLaw::all_plus(), YLaw::zero(), 1), contract_error);
        CHECK_THROWS_AS(init(m2, 10, OpinionLaw::bernoulli(1.5), YLaw::zero(), 1),
                        contract_error);
        CHECK_THROWS_AS(init(m2, 10, OpinionLaw::first_k_plus(11), YLaw::zero(), 1),
                        contract_error);
        CHECK_THROWS_AS(init(m2, 10, OpinionLaw::all_plus(), YLaw::constant(1.5), 1),
                        contract_error);
    }
}

TEST_CASE("identical seeds and call sequences reproduce bitwise") {
    const Model2Params p;
    const auto make = [&] {
        SimState s = init(p, 60, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 42);
        run(s, 1.0);
        run(s, 2.5);
        return make_snapshot(s);
    };
    const Snapshot a = make();
    const Snapshot b = make();
    CHECK(snapshots_equal(a, b));

    SimState other = init(p, 60, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 43);
    run(other, 1.0);
    run(other, 2.5);
    CHECK_FALSE(snapshots_equal(a, make_snapshot(other)));

    SimState back = init(p, 60, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 42);
    run(back, 2.5);
    CHECK_THROWS_AS(run(back, 2.0), contract_error);
}

TEST_CASE("snapshot types follow the remnant-removal formula") {
    const Model2Params p;
    SimState s = init(p, 40, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 9);
    run(s, 1.7);
    const Snapshot snap = make_snapshot(s);
    for (int i = 0; i < snap.n(); ++i)
        CHECK(snap.types[i] == vertex_type(snap.y[i], snap.y0[i], snap.t));
}

TEST_CASE("sampling hook fires on the observer grid") {
    const Model2Params p;
    SimState s = init(p, 30, OpinionLaw::bernoulli(0.5), YLaw::zero(), 3);
    std::vector<double> times;
    RunHooks hooks;
    hooks.sample_dt = 0.25;
    hooks.on_sample = [&](const SimState& st) {
        times.push_back(st.t);
        for (const VertexState& v : st.vertices) CHECK(v.last_update == st.t);
    };
    run(s, 1.0, hooks);
    REQUIRE(times.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(times[k] == doctest::Approx(0.25 * (k + 1)).epsilon(1e-12));

    // sample_dt = 0: only the final time fires
    SimState s2 = init(p, 30, OpinionLaw::bernoulli(0.5), YLaw::zero(), 3);
    times.clear();
    RunHooks final_only;
    final_only.on_sample = [&](const SimState& st) { times.push_back(st.t); };
    run(s2, 1.0, final_only);
    REQUIRE(times.size() == 1);
    CHECK(times[0] == 1.0);
}

TEST_CASE("flip model matches its closed-form relaxation") {
    const Model1Params p;  // gamma_pm = 1.5, gamma_mp = 1.0
    const int n = 500, seeds = 100;
    const double T = 1.5;
    double mean = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        SimState s = init(p, n, OpinionLaw::all_plus(), YLaw::uniform(), seed, true);
        run(s, T);
        mean += static_cast<double>(s.n_plus) / n;
    }
    mean /= seeds;
    const double want = relaxation_p_plus(T, 1.0, p);
    // vertices flip independently, so N+ is Binomial(n, p(T)); 3.6 sigma of
    // the seed-averaged mean
    const double sigma = std::sqrt(want * (1.0 - want) / n) / std::sqrt(seeds);
    CHECK(std::abs(mean - want) < 3.6 * sigma);
}

TEST_CASE("copy model with opinion-blind edges keeps the mean fraction") {
    // pi_+ = pi_- makes the edge process independent of opinions; starting
    // from an exactly balanced block, swapping the two halves is a symmetry,
    // so E[fraction(T)] = 1/2 exactly
    Model2Params p;
    p.pi_p = p.pi_m = 0.6;
    p.p0 = 0.2;
    const int n = 100, seeds = 200;
    std::vector<double> fr(seeds);
    double mean = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
        SimState s = init(p, n, OpinionLaw::first_k_plus(n / 2), YLaw::uniform(), 100 + seed);
        run(s, 2.0);
        fr[seed] = static_cast<double>(s.n_plus) / n;
        mean += fr[seed];
    }
    mean /= seeds;
    double var = 0.0;
    for (double f : fr) var += (f - mean) * (f - mean);
    const double sd = std::sqrt(var / (seeds - 1));
    CHECK(std::abs(mean - 0.5) < 3.5 * std::max(sd, 0.01) / std::sqrt(seeds));
}

TEST_CASE("event counts follow the clock rates") {
    const Model2Params p;  // beta = 0.66
    SimState s = init(p, 100, OpinionLaw::bernoulli(0.5), YLaw::zero(), 17);
    run(s, 3.0);
    const double lam_v = 100 * 0.66 * 3.0;
    const double lam_e = 4950.0 * 3.0;
    CHECK(std::abs(static_cast<double>(s.n_vertex_events) - lam_v) < 4.0 * std::sqrt(lam_v));
    CHECK(std::abs(static_cast<double>(s.n_edge_events) - lam_e) < 4.0 * std::sqrt(lam_e));
}

TEST_CASE("lazy y updates replay the exact exposure integral") {
    const Model1Params p;
    SimState s = init(p, 10, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 23, true);
    const Snapshot before = make_snapshot(s);

    std::map<int, std::vector<VertexEvent>> events;
    RunHooks hooks;
    hooks.on_vertex_event = [&](const VertexEvent& e) { events[e.vertex].push_back(e); };
    const double T = 5.0;
    run(s, T, hooks);
    const Snapshot after = make_snapshot(s);

    for (int i = 0; i < 10; ++i) {
        // piece together the opinion segments of vertex i
        double y = std::exp(-T) * before.y0[i];
        double a = 0.0;
        Opinion op = before.opinions[i];
        auto add = [&](double b) {
            if (op == Opinion::Plus) y += std::exp(-(T - b)) - std::exp(-(T - a));
        };
        for (const VertexEvent& e : events[i]) {
            CHECK(e.before == op);
            add(e.t);
            a = e.t;
            op = e.after;
        }
        add(T);
        CHECK(after.y[i] == doctest::Approx(y).epsilon(1e-9));
        CHECK(after.opinions[i] == op);
    }
}

TEST_CASE("isolated vertices keep their opinion") {
    Model2Params p;
    p.pi_p = p.pi_m = 0.0;
    p.p0 = 0.0;  // no edges, ever
    SimState s = init(p, 2, OpinionLaw::first_k_plus(1), YLaw::zero(), 5);
    run(s, 50.0);
    CHECK(s.n_vertex_events > 0);
    CHECK(s.vertices[0].opinion == Opinion::Plus);
    CHECK(s.vertices[1].opinion == Opinion::Minus);
}

TEST_CASE("neighbour counts on a complete graph") {
    Model2Params p;
    p.p0 = 1.0;
    SimState s = init(p, 4, OpinionLaw::first_k_plus(2), YLaw::zero(), 1);
    CHECK(s.neighbour_counts(0) == std::pair<int, int>{3, 1});
    CHECK(s.neighbour_counts(2) == std::pair<int, int>{3, 2});
    CHECK(s.graph().min_degree() == 3);
}

TEST_CASE("nonlinear exponent only touches disagreeing pairs") {
    Model2Params lin;
    Model2Params non = lin;
    non.q_exp = 2.0;
    CHECK(non.nonlinear());

    // from consensus the disagreeing-pair rule is never exercised: bitwise
    // identical evolution
    SimState a = init(lin, 50, OpinionLaw::all_plus(), YLaw::uniform(), 77);
    SimState b = init(non, 50, OpinionLaw::all_plus(), YLaw::uniform(), 77);
    run(a, 1.0);
    run(b, 1.0);
    CHECK(snapshots_equal(make_snapshot(a), make_snapshot(b)));

    // from a mixed start the exponent changes the edge process
    SimState c = init(lin, 50, OpinionLaw::first_k_plus(25), YLaw::uniform(), 78);
    SimState d = init(non, 50, OpinionLaw::first_k_plus(25), YLaw::uniform(), 78);
    run(c, 1.0);
    run(d, 1.0);
    CHECK(EdgeSet::disagreement(*make_snapshot(c).graph, *make_snapshot(d).graph) > 0);
}

TEST_CASE("layered model: resulting graph equals the combination rule") {
    Model3Params p;
    p.q = 2;
    p.p0 = 0.3;

    SUBCASE("maintained incrementally through a run") {
        SimState s = init(p, 40, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 13);
        REQUIRE(s.layers.size() == 4);
        REQUIRE(s.result.has_value());
        run(s, 1.0);
        CHECK(s.n_edge_events > 0);
        for (int i = 0; i < 40; ++i)
            for (int j = i + 1; j < 40; ++j) {
                const bool all_g = s.layers[0].active(i, j) && s.layers[1].active(i, j);
                const bool all_r = s.layers[2].active(i, j) && s.layers[3].active(i, j);
                const bool want = (all_g && !s.layers[2].active(i, j) &&
                                   !s.layers[3].active(i, j)) ||
                                  (all_r && !s.layers[0].active(i, j) &&
                                   !s.layers[1].active(i, j));
                CHECK(s.result->active(i, j) == want);
            }
    }

    SUBCASE("degenerate coin probabilities empty the resulting graph") {
        for (double p0 : {0.0, 1.0}) {
            Model3Params q = p;
            q.p0 = p0;
            SimState s = init(q, 20, OpinionLaw::bernoulli(0.5), YLaw::zero(), 2);
            CHECK(s.result->active_count() == 0);
        }
    }
}

TEST_CASE("mimicking process follows the supplied densities") {
    SUBCASE("all-Plus densities drive consensus") {
        const Model2Params p;
        SimState s = init(p, 60, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 31);
        run_mimicking(s, 25.0, constant_trajectory(1.0, 25.0));
        CHECK(s.n_plus == 60);
    }

    SUBCASE("balanced densities act as a fair coin") {
        const Model2Params p;
        const int n = 1500;
        SimState s = init(p, n, OpinionLaw::bernoulli(0.5), YLaw::uniform(), 32);
        run_mimicking(s, 1.5, constant_trajectory(0.5, 1.5));
        CHECK(std::abs(static_cast<double>(s.n_plus) / n - 0.5) <
              3.5 * 0.5 / std::sqrt(n));
    }

    SUBCASE("contract checks") {
        const Model2Params p;
        SimState s = init(p, 20, OpinionLaw::bernoulli(0.5), YLaw::zero(), 33);
        CHECK_THROWS_AS(run_mimicking(s, 2.0, constant_trajectory(0.5, 1.0)), config_error);
        Model2Params non;
        non.q_exp = 2.0;
        SimState t = init(non, 20, OpinionLaw::bernoulli(0.5), YLaw::zero(), 34);
        CHECK_THROWS_AS(run_mimicking(t, 1.0, constant_trajectory(0.5, 1.0)), contract_error);
        const Model1Params m1;
        SimState u = init(m1, 20, OpinionLaw::bernoulli(0.5), YLaw::zero(), 35);
        CHECK_THROWS_AS(run_mimicking(u, 1.0, constant_trajectory(0.5, 1.0)), contract_error);
    }
}

TEST_CASE("coupled run with the mirrored adoption rule never separates") {
    // feeding the mimicking side the real side's exact neighbour fraction
    // makes every shared uniform decide both sides identically
    const AlphaProvider mirror = [](double, int v, const SimState& real, const SimState&) {
        const auto [total, plus] = real.neighbour_counts(v);
        if (total == 0) return real.vertices[v].opinion == Opinion::Plus ? 1.0 : 0.0;
        return static_cast<double>(plus) / total;
    };
    const Model2Params p;
    const CouplingTrace trace =
        run_coupled(p, 80, 3.0, 0.5, 3, mirror, OpinionLaw::bernoulli(0.5), YLaw::uniform());
    REQUIRE(trace.t.size() >= 6);
    REQUIRE(trace.d_v.size() == trace.t.size());
    REQUIRE(trace.d_e.size() == trace.t.size());
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        CHECK(trace.d_v[k] == 0);
        CHECK(trace.d_e[k] == 0);
    }
    CHECK(trace.n == 80);
}

TEST_CASE("coupled run against solved densities stays close at moderate n") {
    const Model2Params p;
    DensityField init_f(0.0, 128);
    for (int i = 0; i <= 128; ++i) {
        init_f.f_plus[i] = 0.5;
        init_f.f_minus[i] = 0.5;
    }
    const DensityTrajectory dens = solve_model2(init_f, p, PdeConfig{128, 0.5 / 128, 2.0, 16});
    const CouplingTrace trace =
        run_coupled(p, 150, 2.0, 0.5, 7, dens, OpinionLaw::bernoulli(0.5), YLaw::uniform());
    // the discrepancies stay a vanishing share of their ranges
    CHECK(trace.d_v.back() < 150 * 0.25);
    CHECK(trace.d_e.back() < EdgeSet::pair_count(150) * 0.10);
}
