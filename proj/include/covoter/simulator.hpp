#ifndef COVOTER_SIMULATOR_HPP
#define COVOTER_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "covoter/density.hpp"
#include "covoter/edge_set.hpp"
#include "covoter/params.hpp"
#include "covoter/rng.hpp"
#include "covoter/vertex.hpp"

namespace covoter {

/** Initial opinion assignment. */
struct OpinionLaw {
    enum class Kind { all_plus, all_minus, bernoulli, first_k_plus };
    Kind kind = Kind::bernoulli;
    double p = 0.5; // bernoulli success probability
    int k = 0;      // first_k_plus block size

    static OpinionLaw all_plus() { return {Kind::all_plus, 0, 0}; }
    static OpinionLaw all_minus() { return {Kind::all_minus, 0, 0}; }
    static OpinionLaw bernoulli(double p) { return {Kind::bernoulli, p, 0}; }
    static OpinionLaw first_k_plus(int k) { return {Kind::first_k_plus, 0, k}; }
};

/** Initial y (= y0) assignment. */
struct YLaw {
    enum class Kind { zero, constant, uniform };
    Kind kind = Kind::zero;
    double value = 0.0;

    static YLaw zero() { return {Kind::zero, 0}; }
    static YLaw constant(double v) { return {Kind::constant, v}; }
    static YLaw uniform() { return {Kind::uniform, 0}; }
};

/** Live simulation state. Vertex y values are advanced lazily: correct at
 *  each vertex's own events and whenever a snapshot or sample is taken. */
struct SimState {
    double t = 0.0;
    ModelParams params;
    std::vector<VertexState> vertices;
    /** Edge layers: empty in vertex-only mode; one entry for models 1/2;
     *  2q entries for model 3 (green layers first, then red). */
    std::vector<EdgeSet> layers;
    /** Model 3 only: the resulting graph, kept incrementally equal to the
     *  layer-combination rule (active in all copies of exactly one colour,
     *  inactive in all copies of the other). */
    std::optional<EdgeSet> result;

    RngStream rng;
    uint64_t race_counter = 0;
    std::vector<uint32_t> vertex_rings;            // per-vertex clock counts
    std::vector<std::vector<uint32_t>> edge_rings; // per layer, per pair

    int n_plus = 0; // maintained count of Plus vertices
    uint64_t n_vertex_events = 0;
    uint64_t n_edge_events = 0;

    int n() const { return static_cast<int>(vertices.size()); }
    bool vertex_only() const { return layers.empty(); }
    /** The graph the vertex dynamics reads: the resulting graph for model 3,
     *  the single layer otherwise. */
    const EdgeSet& graph() const { return result ? *result : layers.at(0); }

    /** Bring vertex i's y up to time `to` (its opinion is constant since its
     *  last update). */
    void advance_vertex(int i, double to);
    /** Bring every vertex's y up to state.t. */
    void advance_all();
    /** Neighbour counts of i in graph(): (total, holding Plus). */
    std::pair<int, int> neighbour_counts(int i) const;
};

/** Immutable state extract. `types` holds y - e^{-t} y0; `permutation` is
 *  the canonical relabelling (Plus before Minus, increasing type, ties by
 *  original index): permutation[r] = original index of rank r. */
struct Snapshot {
    double t = 0.0;
    std::vector<Opinion> opinions;
    std::vector<double> y;
    std::vector<double> y0;
    std::vector<double> types;
    std::optional<EdgeSet> graph;  // resulting graph (model 3) or the single layer
    std::vector<EdgeSet> layers;   // model 3: the 2q layers, green first
    std::vector<int> permutation;

    int n() const { return static_cast<int>(opinions.size()); }
    int n_plus() const;
};

/** Disagreement trace of a coupled pair of processes. */
struct CouplingTrace {
    int n = 0;
    std::vector<double> t;
    std::vector<int> d_v;        // vertices with differing opinions
    std::vector<long long> d_e;  // unordered pairs with differing edge states
    std::vector<int> min_degree; // minimum vertex degree over both processes
};

/** One vertex-clock ring. */
struct VertexEvent {
    double t = 0;
    int vertex = 0;
    Opinion before = Opinion::Minus;
    Opinion after = Opinion::Minus;
};

/** Run observers. `on_sample` fires at t = k * sample_dt (k = 1, 2, ...)
 *  and at the final time, after all y values have been advanced;
 *  `on_vertex_event` fires at every vertex-clock ring. */
struct RunHooks {
    double sample_dt = 0.0; // 0: only the final time is sampled
    std::function<void(const SimState&)> on_sample;
    std::function<void(const VertexEvent&)> on_vertex_event;
};

/** Fresh state at t=0: each unordered pair active independently with
 *  probability params.p0 (each layer independently for model 3); opinions
 *  and y0 i.i.d. from the given laws. vertex_only skips edge construction
 *  entirely (model 1 only: its vertex dynamics never reads the graph). */
SimState init(const ModelParams& params, int n, OpinionLaw opinion_law, YLaw y_law,
              uint64_t seed, bool vertex_only = false);

/** Like init(), but with a single edge layer regardless of model — the form
 *  the mimicking process and both sides of a coupled run operate on.
 *  Identical to init() for model 2. Models 2/3 only. */
SimState init_single_layer(const ModelParams& params, int n, OpinionLaw opinion_law,
                           YLaw y_law, uint64_t seed);

/** Advance the event-driven dynamics to time `until`.
 *
 *  Exponential race over the total rate: vertex rate (model 1: N+ g_pm +
 *  N- g_mp; models 2/3: n beta) plus edge rate (one rate-1 clock per pair
 *  per layer). Vertex events: model 1 flips; models 2/3 copy a uniformly
 *  random neighbour in graph() (realized as one uniform u < N_i^+/N_i;
 *  keeps opinion when isolated). Edge events resample the pair: active
 *  with probability pi_+ (both endpoints Plus), pi_- (both Minus), or
 *  (pi_+ + pi_-)/2 for disagreeing pairs — raised to q_exp in the
 *  nonlinear model-2 variant; model-3 layers use their colour's pi. */
void run(SimState& state, double until, const RunHooks& hooks = {});

/** Same clock structure, but a ringing vertex adopts Plus with probability
 *  alpha(t; type, slice) (alpha_tilde for model 3), independent of the
 *  graph, and edge resampling uses the opinion-averaged probabilities
 *  (model 2: (pi_{x_i}+pi_{x_j})/2; model 3, single-layer form:
 *  2[(s/4)(2-s)]^q with s = p(x_i)+p(x_j), p from Model3Params::p_of).
 *  The trajectory must cover [state.t, until]; densities between stored
 *  slices are linearly interpolated. Models 2/3 only. */
void run_mimicking(SimState& state, double until, const DensityTrajectory& densities,
                   const RunHooks& hooks = {});

/** Plus-adoption probability for the mimicking side of a coupled run,
 *  evaluated at a vertex ring. Receives both processes so tests can feed
 *  the real process's exact neighbour fractions. */
using AlphaProvider =
    std::function<double(double t, int vertex, const SimState& real_state,
                         const SimState& mimicking_state)>;

/** Drive a co-evolutionary process and its mimicking counterpart from one
 *  shared event stream: identical clocks and identical uniforms per
 *  (entity, ring-counter). At a vertex ring the real process compares the
 *  shared u against N_i^+/N_i, the mimicking process against the provided
 *  alpha. Both sides hold a single edge set resampled by the
 *  opinion-averaged rule above (each side from its own opinions). Model 2
 *  or model 3 params only. Records d_V, d_E, min_degree at multiples of
 *  sample_dt and at `until`. */
CouplingTrace run_coupled(const ModelParams& params, int n, double until,
                          double sample_dt, uint64_t seed, const AlphaProvider& alpha,
                          OpinionLaw opinion_law = OpinionLaw::bernoulli(0.5),
                          YLaw y_law = YLaw::zero());

/** Convenience: alpha from a solved density trajectory. */
CouplingTrace run_coupled(const ModelParams& params, int n, double until,
                          double sample_dt, uint64_t seed,
                          const DensityTrajectory& densities,
                          OpinionLaw opinion_law = OpinionLaw::bernoulli(0.5),
                          YLaw y_law = YLaw::zero());

/** Canonical vertex order: Plus before Minus, then increasing type, ties
 *  by original index. Returns ranks -> original index. */
std::vector<int> canonical_permutation(const std::vector<Opinion>& opinions,
                                       const std::vector<double>& types);

/** Snapshot of the state at state.t (y values advanced in the copy). */
Snapshot make_snapshot(const SimState& state);

} // namespace covoter

#endif
