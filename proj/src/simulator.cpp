#include "covoter/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covoter/kernels.hpp"

namespace covoter {

void SimState::advance_vertex(int i, double to) {
    VertexState& v = vertices[i];
    if (to <= v.last_update) return;
    v.y = advance_y(v.y, v.opinion, to - v.last_update);
    v.last_update = to;
}

void SimState::advance_all() {
    for (int i = 0; i < n(); ++i) advance_vertex(i, t);
}

std::pair<int, int> SimState::neighbour_counts(int i) const {
    const EdgeSet& g = graph();
    int total = 0, plus = 0;
    for (int j = 0; j < n(); ++j) {
        if (j == i || !g.active(i, j)) continue;
        ++total;
        if (vertices[j].opinion == Opinion::Plus) ++plus;
    }
    return {total, plus};
}

int Snapshot::n_plus() const {
    int c = 0;
    for (Opinion o : opinions) c += o == Opinion::Plus;
    return c;
}

namespace {

int model_index(const ModelParams& p) { return static_cast<int>(p.index()) + 1; }

/** Probability that a resampled pair becomes active, given the endpoint
 *  opinions and (for model 3) which layer rang. */
double activation_prob(const ModelParams& params, int layer, Opinion a, Opinion b) {
    if (const auto* m3 = std::get_if<Model3Params>(&params)) {
        const KernelParams k = layer < m3->q ? m3->kernel_g() : m3->kernel_r();
        if (a == b) return a == Opinion::Plus ? k.pi_p : k.pi_m;
        return 0.5 * (k.pi_p + k.pi_m);
    }
    const KernelParams k = std::holds_alternative<Model1Params>(params)
                               ? std::get<Model1Params>(params).kernel()
                               : std::get<Model2Params>(params).kernel();
    if (a == b) return a == Opinion::Plus ? k.pi_p : k.pi_m;
    const double mean = 0.5 * (k.pi_p + k.pi_m);
    if (const auto* m2 = std::get_if<Model2Params>(&params); m2 && m2->nonlinear())
        return std::pow(mean, m2->q_exp);
    return mean;
}

/** Single-edge-set resampling probability of the mimicking construction:
 *  model 2 averages the endpoint acceptance values (which coincides with
 *  the linear rule); model 3 collapses its 2q layers into
 *  2 [ (s/4)(2-s) ]^q with s = p(x_i) + p(x_j). */
double mimicking_edge_prob(const ModelParams& params, Opinion a, Opinion b) {
    if (const auto* m3 = std::get_if<Model3Params>(&params)) {
        const double s = m3->p_of(a) + m3->p_of(b);
        double base = 0.25 * s * (2.0 - s);
        double r = 2.0;
        for (int k = 0; k < m3->q; ++k) r *= base;
        return std::min(r, 1.0);
    }
    const Model2Params& m2 = std::get<Model2Params>(params);
    const double pa = a == Opinion::Plus ? m2.pi_p : m2.pi_m;
    const double pb = b == Opinion::Plus ? m2.pi_p : m2.pi_m;
    return 0.5 * (pa + pb);
}

/** Recompute the resulting-graph state of one pair from the colour layers. */
bool combine_layers(const std::vector<EdgeSet>& layers, int q, int i, int j) {
    int cg = 0, cr = 0;
    for (int l = 0; l < q; ++l) cg += layers[l].active(i, j);
    for (int l = q; l < 2 * q; ++l) cr += layers[l].active(i, j);
    return (cg == q && cr == 0) || (cr == q && cg == 0);
}

SimState init_impl(const ModelParams& params, int n, OpinionLaw opinion_law, YLaw y_law,
                   uint64_t seed, int n_layers) {
    validate(params);
    require(n >= 2, "simulation needs at least 2 vertices");

    SimState s;
    s.params = params;
    s.rng = RngStream(seed);
    s.t = 0.0;
    s.vertices.resize(n);
    s.vertex_rings.assign(n, 0);

    if (opinion_law.kind == OpinionLaw::Kind::bernoulli)
        require(opinion_law.p >= 0.0 && opinion_law.p <= 1.0,
                "bernoulli opinion probability must lie in [0,1]");
    if (opinion_law.kind == OpinionLaw::Kind::first_k_plus)
        require(opinion_law.k >= 0 && opinion_law.k <= n,
                "first_k_plus block size must lie in [0,n]");
    if (y_law.kind == YLaw::Kind::constant)
        require(y_law.value >= 0.0 && y_law.value <= 1.0, "constant y0 must lie in [0,1]");

    s.n_plus = 0;
    for (int i = 0; i < n; ++i) {
        VertexState& v = s.vertices[i];
        switch (opinion_law.kind) {
            case OpinionLaw::Kind::all_plus: v.opinion = Opinion::Plus; break;
            case OpinionLaw::Kind::all_minus: v.opinion = Opinion::Minus; break;
            case OpinionLaw::Kind::bernoulli:
                v.opinion = s.rng.u01(RngKind::init_opinion, i, 0) < opinion_law.p
                                ? Opinion::Plus
                                : Opinion::Minus;
                break;
            case OpinionLaw::Kind::first_k_plus:
                v.opinion = i < opinion_law.k ? Opinion::Plus : Opinion::Minus;
                break;
        }
        switch (y_law.kind) {
            case YLaw::Kind::zero: v.y0 = 0.0; break;
            case YLaw::Kind::constant: v.y0 = y_law.value; break;
            case YLaw::Kind::uniform: v.y0 = s.rng.u01(RngKind::init_y, i, 0); break;
        }
        v.y = v.y0;
        v.last_update = 0.0;
        s.n_plus += v.opinion == Opinion::Plus;
    }

    const double p0 = std::visit([](const auto& m) { return m.p0; }, params);
    const long long pairs = EdgeSet::pair_count(n);
    s.layers.reserve(n_layers);
    s.edge_rings.assign(n_layers, std::vector<uint32_t>(pairs, 0));
    for (int l = 0; l < n_layers; ++l) {
        EdgeSet e(n);
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i) {
                const long long idx = EdgeSet::pair_index(i, j);
                if (s.rng.u01(RngKind::init_edge, static_cast<uint64_t>(l * pairs + idx), 0) < p0)
                    e.set(i, j, true);
            }
        s.layers.push_back(std::move(e));
    }

    if (const auto* m3 = std::get_if<Model3Params>(&params);
        m3 && n_layers == 2 * m3->q) {
        EdgeSet r(n);
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i)
                if (combine_layers(s.layers, m3->q, i, j)) r.set(i, j, true);
        s.result = std::move(r);
    }
    return s;
}

/** Shared sample scheduling: fires the hook at every multiple of sample_dt
 *  in (from, limit] and remembers the last fired time so the final-time
 *  fire is never duplicated. */
class SampleSchedule {
  public:
    SampleSchedule(double sample_dt, double start)
        : dt_(sample_dt), last_fired_(-std::numeric_limits<double>::infinity()) {
        k_ = 1;
        if (dt_ > 0.0)
            while (k_ * dt_ <= start + 1e-12) ++k_;
    }

    template <typename Fire>
    void through(double limit, double until, Fire&& fire) {
        if (dt_ <= 0.0) return;
        while (true) {
            const double s = k_ * dt_;
            if (s > limit + 1e-12 || s > until + 1e-12) break;
            fire(std::min(s, until));
            last_fired_ = s;
            ++k_;
        }
    }

    template <typename Fire>
    void fire_final(double until, Fire&& fire) {
        if (last_fired_ < until - 1e-12) fire(until);
    }

  private:
    double dt_;
    double last_fired_;
    long long k_;
};

/** Uniform vertex pair via rejection on the diagonal; consumes race draws. */
std::pair<int, int> draw_pair(SimState& s, int n) {
    while (true) {
        const double ui = s.rng.u01(RngKind::race, 0, s.race_counter++);
        const double uj = s.rng.u01(RngKind::race, 0, s.race_counter++);
        const int i = std::min(static_cast<int>(ui * n), n - 1);
        const int j = std::min(static_cast<int>(uj * n), n - 1);
        if (i != j) return {i, j};
    }
}

}  // namespace

SimState init(const ModelParams& params, int n, OpinionLaw opinion_law, YLaw y_law,
              uint64_t seed, bool vertex_only) {
    if (vertex_only)
        require(std::holds_alternative<Model1Params>(params),
                "vertex-only mode is limited to the flip model, whose vertices never read the graph");
    int n_layers = 1;
    if (vertex_only)
        n_layers = 0;
    else if (const auto* m3 = std::get_if<Model3Params>(&params))
        n_layers = 2 * m3->q;
    return init_impl(params, n, opinion_law, y_law, seed, n_layers);
}

SimState init_single_layer(const ModelParams& params, int n, OpinionLaw opinion_law,
                           YLaw y_law, uint64_t seed) {
    require(!std::holds_alternative<Model1Params>(params),
            "single-layer construction applies to the copy models only");
    return init_impl(params, n, opinion_law, y_law, seed, 1);
}

void run(SimState& state, double until, const RunHooks& hooks) {
    validate(state.params);
    require(until >= state.t, "run: target time must not precede the current time");
    const int n = state.n();
    const int model = model_index(state.params);
    if (state.vertex_only())
        require(model == 1, "run: only the flip model supports vertex-only states");
    else if (const auto* m3 = std::get_if<Model3Params>(&state.params))
        require(static_cast<int>(state.layers.size()) == 2 * m3->q && state.result.has_value(),
                "run: layered-model state must carry 2q layers and the resulting graph");
    else
        require(state.layers.size() == 1, "run: state must carry exactly one edge layer");

    const double g_pm = model == 1 ? std::get<Model1Params>(state.params).gamma_pm : 0.0;
    const double g_mp = model == 1 ? std::get<Model1Params>(state.params).gamma_mp : 0.0;
    const double beta =
        model == 2 ? std::get<Model2Params>(state.params).beta
                   : (model == 3 ? std::get<Model3Params>(state.params).beta : 0.0);
    const int q3 = model == 3 ? std::get<Model3Params>(state.params).q : 0;

    // model 1 picks the flipping vertex from its opinion class; keep the two
    // classes as swap-remove lists so the pick is O(1)
    std::vector<int> members[2];
    std::vector<int> pos;
    if (model == 1) {
        pos.resize(n);
        for (int i = 0; i < n; ++i) {
            const int c = state.vertices[i].opinion == Opinion::Plus ? 0 : 1;
            pos[i] = static_cast<int>(members[c].size());
            members[c].push_back(i);
        }
    }

    const long long pairs = EdgeSet::pair_count(n);
    const double edge_rate =
        state.vertex_only() ? 0.0
                            : static_cast<double>(pairs) * static_cast<double>(state.layers.size());

    SampleSchedule schedule(hooks.sample_dt, state.t);
    auto fire = [&](double ts) {
        state.t = ts;
        state.advance_all();
        if (hooks.on_sample) hooks.on_sample(state);
    };

    while (true) {
        const double vertex_rate =
            model == 1 ? state.n_plus * g_pm + (n - state.n_plus) * g_mp : n * beta;
        const double total = vertex_rate + edge_rate;
        const double wait =
            state.rng.exponential(total, RngKind::race, 0, state.race_counter++);
        const double t_next = state.t + wait;
        if (t_next > until) break;
        schedule.through(t_next, until, fire);
        state.t = t_next;

        const double u_cat = state.rng.u01(RngKind::race, 0, state.race_counter++);
        if (u_cat * total < vertex_rate) {
            int i;
            if (model == 1) {
                const double u_cls = state.rng.u01(RngKind::race, 0, state.race_counter++);
                const int c = u_cls * vertex_rate < state.n_plus * g_pm ? 0 : 1;
                const double u_mem = state.rng.u01(RngKind::race, 0, state.race_counter++);
                const auto& lst = members[c];
                i = lst[std::min(static_cast<std::size_t>(u_mem * lst.size()), lst.size() - 1)];
            } else {
                const double u_mem = state.rng.u01(RngKind::race, 0, state.race_counter++);
                i = std::min(static_cast<int>(u_mem * n), n - 1);
            }
            state.advance_vertex(i, state.t);
            const uint32_t ring = state.vertex_rings[i]++;
            VertexState& v = state.vertices[i];
            const Opinion before = v.opinion;
            Opinion after = before;
            if (model == 1) {
                after = flipped(before);
            } else {
                const double u_act =
                    state.rng.u01(RngKind::vertex_action, static_cast<uint64_t>(i), ring);
                const auto [total_nb, plus_nb] = state.neighbour_counts(i);
                if (total_nb > 0)
                    after = u_act < static_cast<double>(plus_nb) / total_nb ? Opinion::Plus
                                                                            : Opinion::Minus;
            }
            if (after != before) {
                v.opinion = after;
                state.n_plus += after == Opinion::Plus ? 1 : -1;
                if (model == 1) {
                    const int from = before == Opinion::Plus ? 0 : 1;
                    auto& src = members[from];
                    const int p = pos[i];
                    src[p] = src.back();
                    pos[src[p]] = p;
                    src.pop_back();
                    auto& dst = members[1 - from];
                    pos[i] = static_cast<int>(dst.size());
                    dst.push_back(i);
                }
            }
            ++state.n_vertex_events;
            if (hooks.on_vertex_event) hooks.on_vertex_event({state.t, i, before, after});
        } else {
            int layer = 0;
            if (state.layers.size() > 1) {
                const double u_l = state.rng.u01(RngKind::race, 0, state.race_counter++);
                layer = std::min(static_cast<int>(u_l * state.layers.size()),
                                 static_cast<int>(state.layers.size()) - 1);
            }
            const auto [i, j] = draw_pair(state, n);
            const long long pidx = EdgeSet::pair_index(i, j);
            const uint32_t ring = state.edge_rings[layer][pidx]++;
            const double u = state.rng.u01(
                RngKind::edge_action, static_cast<uint64_t>(layer * pairs + pidx), ring);
            const double prob = activation_prob(state.params, layer,
                                                state.vertices[i].opinion,
                                                state.vertices[j].opinion);
            state.layers[layer].set(i, j, u < prob);
            if (model == 3)
                state.result->set(i, j, combine_layers(state.layers, q3, i, j));
            ++state.n_edge_events;
        }
    }

    schedule.through(until, until, fire);
    state.t = until;
    state.advance_all();
    if (hooks.on_sample) schedule.fire_final(until, fire);
}

void run_mimicking(SimState& state, double until, const DensityTrajectory& densities,
                   const RunHooks& hooks) {
    validate(state.params);
    require(until >= state.t, "run_mimicking: target time must not precede the current time");
    require(!std::holds_alternative<Model1Params>(state.params),
            "run_mimicking applies to the copy models only");
    require(state.layers.size() == 1,
            "run_mimicking: state must hold a single edge layer (see init_single_layer)");
    require_config(densities.covers(state.t, until),
                   "density trajectory does not cover the requested time span");
    if (const auto* m2 = std::get_if<Model2Params>(&state.params))
        require(!m2->nonlinear(), "run_mimicking is defined for the linear edge rule only");

    const int n = state.n();
    const double beta = std::visit(
        [](const auto& m) {
            if constexpr (requires { m.beta; })
                return m.beta;
            else
                return 0.0;
        },
        state.params);
    const auto* m2 = std::get_if<Model2Params>(&state.params);
    const auto* m3 = std::get_if<Model3Params>(&state.params);

    const long long pairs = EdgeSet::pair_count(n);
    const double vertex_rate = n * beta;
    const double edge_rate = static_cast<double>(pairs);
    const double total = vertex_rate + edge_rate;

    SampleSchedule schedule(hooks.sample_dt, state.t);
    auto fire = [&](double ts) {
        state.t = ts;
        state.advance_all();
        if (hooks.on_sample) hooks.on_sample(state);
    };

    while (true) {
        const double wait =
            state.rng.exponential(total, RngKind::race, 0, state.race_counter++);
        const double t_next = state.t + wait;
        if (t_next > until) break;
        schedule.through(t_next, until, fire);
        state.t = t_next;

        const double u_cat = state.rng.u01(RngKind::race, 0, state.race_counter++);
        if (u_cat * total < vertex_rate) {
            const double u_mem = state.rng.u01(RngKind::race, 0, state.race_counter++);
            const int i = std::min(static_cast<int>(u_mem * n), n - 1);
            state.advance_vertex(i, state.t);
            const uint32_t ring = state.vertex_rings[i]++;
            VertexState& v = state.vertices[i];
            const double u_act =
                state.rng.u01(RngKind::vertex_action, static_cast<uint64_t>(i), ring);
            const DensityField slice = densities.at(state.t);
            const double type = vertex_type(v.y, v.y0, state.t);
            const double a = m2 ? alpha(m2->kernel(), slice, type)
                                : alpha_tilde(*m3, slice, type);
            const Opinion before = v.opinion;
            const Opinion after = u_act < a ? Opinion::Plus : Opinion::Minus;
            if (after != before) {
                v.opinion = after;
                state.n_plus += after == Opinion::Plus ? 1 : -1;
            }
            ++state.n_vertex_events;
            if (hooks.on_vertex_event) hooks.on_vertex_event({state.t, i, before, after});
        } else {
            const auto [i, j] = draw_pair(state, n);
            const long long pidx = EdgeSet::pair_index(i, j);
            const uint32_t ring = state.edge_rings[0][pidx]++;
            const double u =
                state.rng.u01(RngKind::edge_action, static_cast<uint64_t>(pidx), ring);
            const double prob = mimicking_edge_prob(state.params, state.vertices[i].opinion,
                                                    state.vertices[j].opinion);
            state.layers[0].set(i, j, u < prob);
            ++state.n_edge_events;
        }
    }

    schedule.through(until, until, fire);
    state.t = until;
    state.advance_all();
    if (hooks.on_sample) schedule.fire_final(until, fire);
}

CouplingTrace run_coupled(const ModelParams& params, int n, double until, double sample_dt,
                          uint64_t seed, const AlphaProvider& alpha_fn,
                          OpinionLaw opinion_law, YLaw y_law) {
    validate(params);
    require(!std::holds_alternative<Model1Params>(params),
            "run_coupled applies to the copy models only");
    require(until >= 0.0, "run_coupled: horizon must be >= 0");
    require(alpha_fn != nullptr, "run_coupled: alpha provider is required");
    if (const auto* m2 = std::get_if<Model2Params>(&params))
        require(!m2->nonlinear(), "run_coupled is defined for the linear edge rule only");

    SimState real = init_single_layer(params, n, opinion_law, y_law, seed);
    SimState mim = init_single_layer(params, n, opinion_law, y_law, seed);

    const double beta = std::visit(
        [](const auto& m) {
            if constexpr (requires { m.beta; })
                return m.beta;
            else
                return 0.0;
        },
        params);
    const long long pairs = EdgeSet::pair_count(n);
    const double vertex_rate = n * beta;
    const double edge_rate = static_cast<double>(pairs);
    const double total = vertex_rate + edge_rate;

    CouplingTrace trace;
    trace.n = n;
    auto record = [&](double ts) {
        real.t = ts;
        mim.t = ts;
        real.advance_all();
        mim.advance_all();
        int dv = 0;
        for (int i = 0; i < n; ++i)
            dv += real.vertices[i].opinion != mim.vertices[i].opinion;
        trace.t.push_back(ts);
        trace.d_v.push_back(dv);
        trace.d_e.push_back(EdgeSet::disagreement(real.layers[0], mim.layers[0]));
        trace.min_degree.push_back(
            std::min(real.layers[0].min_degree(), mim.layers[0].min_degree()));
    };

    record(0.0);
    SampleSchedule schedule(sample_dt, 0.0);

    while (true) {
        const double wait = real.rng.exponential(total, RngKind::race, 0, real.race_counter++);
        const double t_next = real.t + wait;
        if (t_next > until) break;
        schedule.through(t_next, until, record);
        real.t = t_next;
        mim.t = t_next;

        const double u_cat = real.rng.u01(RngKind::race, 0, real.race_counter++);
        if (u_cat * total < vertex_rate) {
            const double u_mem = real.rng.u01(RngKind::race, 0, real.race_counter++);
            const int i = std::min(static_cast<int>(u_mem * n), n - 1);
            real.advance_vertex(i, t_next);
            mim.advance_vertex(i, t_next);
            const uint32_t ring = real.vertex_rings[i]++;
            mim.vertex_rings[i]++;
            const double u = real.rng.u01(RngKind::vertex_action, static_cast<uint64_t>(i), ring);

            const double a = alpha_fn(t_next, i, real, mim);
            const auto [total_nb, plus_nb] = real.neighbour_counts(i);

            VertexState& vr = real.vertices[i];
            if (total_nb > 0) {
                const Opinion after =
                    u < static_cast<double>(plus_nb) / total_nb ? Opinion::Plus : Opinion::Minus;
                if (after != vr.opinion) {
                    real.n_plus += after == Opinion::Plus ? 1 : -1;
                    vr.opinion = after;
                }
            }
            VertexState& vm = mim.vertices[i];
            const Opinion after_m = u < a ? Opinion::Plus : Opinion::Minus;
            if (after_m != vm.opinion) {
                mim.n_plus += after_m == Opinion::Plus ? 1 : -1;
                vm.opinion = after_m;
            }
            ++real.n_vertex_events;
            ++mim.n_vertex_events;
        } else {
            const auto [i, j] = draw_pair(real, n);
            const long long pidx = EdgeSet::pair_index(i, j);
            const uint32_t ring = real.edge_rings[0][pidx]++;
            mim.edge_rings[0][pidx]++;
            const double u =
                real.rng.u01(RngKind::edge_action, static_cast<uint64_t>(pidx), ring);
            const double prob_real = mimicking_edge_prob(params, real.vertices[i].opinion,
                                                         real.vertices[j].opinion);
            const double prob_mim = mimicking_edge_prob(params, mim.vertices[i].opinion,
                                                        mim.vertices[j].opinion);
            real.layers[0].set(i, j, u < prob_real);
            mim.layers[0].set(i, j, u < prob_mim);
            ++real.n_edge_events;
            ++mim.n_edge_events;
        }
    }

    schedule.through(until, until, record);
    schedule.fire_final(until, record);
    return trace;
}

CouplingTrace run_coupled(const ModelParams& params, int n, double until, double sample_dt,
                          uint64_t seed, const DensityTrajectory& densities,
                          OpinionLaw opinion_law, YLaw y_law) {
    require_config(densities.covers(0.0, until),
                   "density trajectory does not cover the requested time span");
    const auto* m2 = std::get_if<Model2Params>(&params);
    const auto* m3 = std::get_if<Model3Params>(&params);
    require(m2 != nullptr || m3 != nullptr, "run_coupled applies to the copy models only");
    AlphaProvider provider = [m2, m3, &densities](double t, int vertex, const SimState&,
                                                  const SimState& mimicking) {
        const VertexState& v = mimicking.vertices[vertex];
        const DensityField slice = densities.at(t);
        const double type = vertex_type(v.y, v.y0, t);
        return m2 ? alpha(m2->kernel(), slice, type) : alpha_tilde(*m3, slice, type);
    };
    return run_coupled(params, n, until, sample_dt, seed, provider, opinion_law, y_law);
}

std::vector<int> canonical_permutation(const std::vector<Opinion>& opinions,
                                       const std::vector<double>& types) {
    require(opinions.size() == types.size(),
            "canonical_permutation: opinion/type size mismatch");
    std::vector<int> perm(opinions.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        const int ca = opinions[a] == Opinion::Plus ? 0 : 1;
        const int cb = opinions[b] == Opinion::Plus ? 0 : 1;
        if (ca != cb) return ca < cb;
        if (types[a] != types[b]) return types[a] < types[b];
        return a < b;
    });
    return perm;
}

Snapshot make_snapshot(const SimState& state) {
    const int n = state.n();
    Snapshot s;
    s.t = state.t;
    s.opinions.resize(n);
    s.y.resize(n);
    s.y0.resize(n);
    s.types.resize(n);
    for (int i = 0; i < n; ++i) {
        const VertexState& v = state.vertices[i];
        s.opinions[i] = v.opinion;
        s.y0[i] = v.y0;
        s.y[i] = advance_y(v.y, v.opinion, state.t - v.last_update);
        s.types[i] = vertex_type(s.y[i], v.y0, state.t);
    }
    if (!state.vertex_only()) {
        s.graph = state.graph();
        if (std::holds_alternative<Model3Params>(state.params) && state.result.has_value())
            s.layers = state.layers;
    }
    s.permutation = canonical_permutation(s.opinions, s.types);
    return s;
}

}  // namespace covoter
