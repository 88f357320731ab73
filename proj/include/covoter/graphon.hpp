#ifndef COVOTER_GRAPHON_HPP
#define COVOTER_GRAPHON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "covoter/density.hpp"
#include "covoter/params.hpp"
#include "covoter/simulator.hpp"

namespace covoter {

/** Block-constant symmetric function on [0,1]^2. Values lie in [0,1] for
 *  graphons proper; differences of graphons (signed values in [-1,1]) are
 *  also carried in this type where noted. */
struct StepGraphon {
    std::vector<double> boundaries; // k+1 strictly increasing, 0 to 1
    std::vector<double> values;     // k*k row major, symmetric

    StepGraphon() = default;
    /** k equal-width blocks, all values `fill`. */
    explicit StepGraphon(int k, double fill = 0.0);

    int k() const { return static_cast<int>(boundaries.size()) - 1; }
    double width(int i) const { return boundaries[i + 1] - boundaries[i]; }
    double value(int i, int j) const { return values[static_cast<size_t>(i) * k() + j]; }
    void set_value(int i, int j, double v) {
        values[static_cast<size_t>(i) * k() + j] = v;
        values[static_cast<size_t>(j) * k() + i] = v;
    }
    /** Point evaluation (cells are left-closed). */
    double at(double x, double y) const;

    void validate(bool allow_signed = false) const;
};

/** Empirical graphon of a snapshot: n equal blocks in canonical order,
 *  value 1 where the relabelled pair is active, diagonal blocks 0. */
StepGraphon from_snapshot(const Snapshot& snap);

/** Reference kernel on a grid_k x grid_k equal-width grid: cell value
 *
 *    H(t; (1-e^{-t}) Fbar(x_c), (1-e^{-t}) Fbar(y_c))
 *
 *  at cell centers, where Fbar is quantile() of the given densities and
 *  the (1-e^{-t}) factor rescales mass coordinates onto the reachable
 *  type range. Model 3 params use the overlay kernel. */
StepGraphon reference(double t, const DensityField& densities, const ModelParams& params,
                      int grid_k);

/** Signed difference a - b on the common boundary refinement. */
StepGraphon difference(const StepGraphon& a, const StepGraphon& b);

/** Integral of |a - b| over [0,1]^2, exact on the common refinement. */
double l1_distance(const StepGraphon& a, const StepGraphon& b);

/** Cut norm sup_{S,T} |int_{S x T} g|, exact for step functions: the
 *  supremum is attained on unions of blocks, so enumerate S over subsets
 *  and pick T per column sign, maximizing both sign objectives. Requires
 *  k <= 22 (enumeration budget); beyond that throws config_error directing
 *  callers to cut_norm_lower_bound. */
double cut_norm_exact(const StepGraphon& g);

/** Lower bound by alternating maximization (optimize T for fixed S and
 *  vice versa until a fixed point), best over keyed random restarts.
 *  Never exceeds cut_norm_exact. */
double cut_norm_lower_bound(const StepGraphon& g, int restarts, uint64_t seed);

/** Block dump round-trip: first line the k+1 boundaries, then k rows of k
 *  block values. */
void write_graphon_csv(const std::string& path, const StepGraphon& g);
StepGraphon read_graphon_csv(const std::string& path);

/** 8-bit binary PGM heatmap: x left to right, y top to bottom, darker
 *  pixels = larger values; blocks are upscaled to at least `min_px`. */
void write_graphon_pgm(const std::string& path, const StepGraphon& g, int min_px = 512);

} // namespace covoter

#endif
