#ifndef COVOTER_KERNELS_HPP
#define COVOTER_KERNELS_HPP

#include "covoter/density.hpp"
#include "covoter/params.hpp"

namespace covoter {

/** Connection-probability kernel at time t between conditioning values
 *  u and v (each in [0,1]):
 *
 *    H(t;u,v) = e^{-t} p0
 *             + (pi_p u + pi_m (1 - e^{-t} - u)
 *             +  pi_p v + pi_m (1 - e^{-t} - v)) / 2.
 *
 *  Affine in u+v, so H(t;u,v) = c(t) + s (u+v) with
 *  c(t) = e^{-t} p0 + pi_m (1 - e^{-t}) and s = (pi_p - pi_m)/2. */
double kernel_h(const KernelParams& k, double t, double u, double v);

/** Intercept / slope of the affine form above. */
double kernel_h_intercept(const KernelParams& k, double t);
double kernel_h_slope(const KernelParams& k);

/** Effective kernel of the q-layer two-colour overlay: an edge is present
 *  iff it is present in all q green layers and no red layer, or in all q
 *  red layers and no green layer:
 *
 *    H_R = H_g^q (1-H_r)^q + H_r^q (1-H_g)^q.  */
double kernel_hr(const Model3Params& p, double t, double u, double v);

/** Probability that the neighbour of a u-typed vertex holds opinion Plus
 *  when neighbours are weighted by H:
 *
 *    alpha(t;u) = Int f_plus(t,y) H(t;y,u) dy
 *               / Int (f_plus + f_minus)(t,y) H(t;y,u) dy.
 *
 *  Grid integrals use the trapezoid rule on the field's nodes. Throws
 *  singular_parameter_error when the denominator falls below 1e-12. */
double alpha(const KernelParams& k, const DensityField& field, double u);

/** Same quantity under the overlay kernel H_R. */
double alpha_tilde(const Model3Params& p, const DensityField& field, double u);

/** alpha at every grid node of the slice, value-identical to calling
 *  alpha()/alpha_tilde() node by node but with the t-dependent kernel
 *  constants hoisted out of the double loop — the form the density solvers
 *  evaluate once per stage. */
std::vector<double> alpha_profile(const KernelParams& k, const DensityField& field);
std::vector<double> alpha_tilde_profile(const Model3Params& p, const DensityField& field);

} // namespace covoter

#endif
