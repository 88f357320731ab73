#ifndef COVOTER_PDE_HPP
#define COVOTER_PDE_HPP

#include <utility>
#include <vector>

#include "covoter/density.hpp"
#include "covoter/params.hpp"

namespace covoter {

/** Plain 2x2 real matrix (row major). */
struct Matrix2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    Matrix2 operator*(const Matrix2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Matrix2 operator+(const Matrix2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Matrix2 scaled(double c) const { return {c * a11, c * a12, c * a21, c * a22}; }
    static Matrix2 identity() { return {1, 0, 0, 1}; }
    double max_abs_diff(const Matrix2& o) const;
};

/** Reaction matrix of the linear two-state flip dynamics,
 *  N = [[1-g_pm, g_mp], [g_pm, 1-g_mp]], appearing in the vector form
 *  d_t v = M(u) d_u v + N v of the transport system. */
Matrix2 rate_matrix(const Model1Params& p);

/** Closed-form exp(N t):
 *
 *    e^t/G * [[g_pm e^{-Gt} + g_mp,   g_mp (1 - e^{-Gt})],
 *             [g_pm (1 - e^{-Gt}),    g_mp e^{-Gt} + g_pm]],   G = g_pm + g_mp.
 */
Matrix2 expm_n(double t, const Model1Params& p);

/** Reference exp(A t) by scaling-and-squaring over a truncated Taylor
 *  series (`terms` terms on the scaled matrix). Cross-check oracle for
 *  expm_n; not used by the solvers. */
Matrix2 expm_taylor(const Matrix2& a, double t, int terms = 40);

/** Closed-form Plus-mass relaxation of the two-state flip chain:
 *  p_+(t) = pi* + (p0_plus - pi*) e^{-Gt}, pi* = g_mp / (g_pm + g_mp). */
double relaxation_p_plus(double t, double p0_plus, const Model1Params& p);

/** Time-stepping configuration. The transport speeds are bounded by 1, so
 *  stability of the forward step requires dt <= 1/M; validate() enforces
 *  exactly that, and the solvers additionally sub-step internally to keep
 *  the effective step within the Heun-with-upwind stability margin. */
struct PdeConfig {
    int M = 200;        // grid cells (M+1 nodes)
    double dt = 0.0025; // outer time step
    double T = 1.0;     // horizon
    int store_every = 1; // keep every k-th outer step in the trajectory

    void validate() const;
};

/** Stationary densities: f_+(u) = u k(u)/B(a,b), f_-(u) = (1-u) k(u)/B(a,b)
 *  with k(u) = u^{a-1}(1-u)^{b-1}. Model 1 uses (a,b) = (g_mp, g_pm);
 *  model 2 uses (a,b) = (beta p_+, beta (1-p_+)). Endpoint nodes where a
 *  shape parameter < 1 makes k blow up are clipped to the neighbouring
 *  node value and the field is renormalized to total mass exactly 1. */
DensityField stationary_model1(const Model1Params& p, int M);
DensityField stationary_model2(double beta, double p_plus, int M);
DensityField stationary_beta(double a, double b, int M);

/** One term of the stationary power-series solution: coefficients of
 *  u^{offset+k} in f_+ and f_- respectively. */
struct SeriesTerm {
    double f_plus = 0;
    double f_minus = 0;
};

/** Power-series recursion for the stationary model-1 system. With
 *  exponent_offset = 0 this is the literal integer-power recursion
 *
 *    f_{+,k+1} = [k - g_pm + 1 + g_mp g_pm/(g_mp - 1 - k)] f_{+,k} / (k+1),
 *    f_{-,k}   = g_pm f_{+,k} / (g_mp - 1 - k),
 *
 *  which requires g_mp not in {1, ..., K+1}. A nonzero offset evaluates the
 *  same ratio on the shifted exponent grid rho_k = offset + k; with
 *  offset = g_mp this reproduces the generalized (non-integer-power)
 *  expansion of the stationary Beta form, whose denominators never vanish.
 *  Throws singular_parameter_error at a denominator pole. */
std::vector<SeriesTerm> series_coefficients(const Model1Params& p, double f_plus_0,
                                            int K, double exponent_offset = 0.0);

/** Advance the coupled transport/reaction system
 *
 *    d_t f_+ + d_u[(1-u) f_+] = r_+,   d_t f_- + d_u[-u f_-] = r_-
 *
 *  with first-order upwind interface fluxes on the node-centered grid
 *  (half-width boundary cells, zero inflow) and Heun time stepping;
 *  reactions r are the model's flip terms (model 1: linear rates; models
 *  2/3: beta alpha exchange with alpha recomputed from the current slice
 *  each stage). Returns slices every cfg.store_every outer steps plus the
 *  initial and final times. */
DensityTrajectory solve_model1(const DensityField& init, const Model1Params& p,
                               const PdeConfig& cfg);
DensityTrajectory solve_model2(const DensityField& init, const Model2Params& p,
                               const PdeConfig& cfg);
DensityTrajectory solve_model3(const DensityField& init, const Model3Params& p,
                               const PdeConfig& cfg);

} // namespace covoter

#endif
