#ifndef COVOTER_PARAMS_HPP
#define COVOTER_PARAMS_HPP

#include <variant>

#include "covoter/common.hpp"
#include "covoter/vertex.hpp"

namespace covoter {

/** The (pi_plus, pi_minus, p0) triple every edge-resampling rule is built
 *  from: pi_plus for agreeing Plus endpoints, pi_minus for agreeing Minus
 *  endpoints, p0 for the initial coin. */
struct KernelParams {
    double pi_p = 0.5;
    double pi_m = 0.5;
    double p0 = 0.5;

    void validate() const {
        require(pi_p >= 0.0 && pi_p <= 1.0, "pi_p must be a probability");
        require(pi_m >= 0.0 && pi_m <= 1.0, "pi_m must be a probability");
        require(p0 >= 0.0 && p0 <= 1.0, "p0 must be a probability");
    }
};

/** Spontaneous-flip model: vertices flip at opinion-dependent rates and
 *  influence edges one-way. */
struct Model1Params {
    double gamma_pm = 1.5; // flip rate Plus -> Minus
    double gamma_mp = 1.0; // flip rate Minus -> Plus
    double pi_p = 0.9;
    double pi_m = 0.1;
    double p0 = 0.05;

    KernelParams kernel() const { return {pi_p, pi_m, p0}; }
    void validate() const {
        require(gamma_pm > 0.0 && gamma_mp > 0.0, "flip rates must be positive");
        kernel().validate();
    }
};

/** Copy model: vertices copy a uniformly random neighbour at rate beta;
 *  edges resample based on endpoint opinions. q_exp = 1 is the linear rule;
 *  q_exp > 1 raises the disagreeing-pair probability to that power. */
struct Model2Params {
    double beta = 0.66;
    double pi_p = 0.9;
    double pi_m = 0.1;
    double p0 = 0.05;
    double q_exp = 1.0;

    KernelParams kernel() const { return {pi_p, pi_m, p0}; }
    bool nonlinear() const { return q_exp != 1.0; }
    void validate() const {
        require(beta > 0.0, "beta must be positive");
        require(q_exp >= 1.0, "q_exp must be >= 1");
        kernel().validate();
    }
};

/** How the two-layer mimicking edge probability collapses the per-colour
 *  acceptance probabilities into one p(x) per opinion. */
enum class LayerWeighting { mean_gr, green_only, red_only };

/** Two-colour layered model: q green and q red edge layers; an edge of the
 *  resulting graph is active iff it is active in all q layers of exactly one
 *  colour. Vertices copy neighbours in the resulting graph at rate beta. */
struct Model3Params {
    double beta = 0.5;
    int q = 1;
    double pi_p_g = 0.9;
    double pi_m_g = 0.1;
    double pi_p_r = 0.1;
    double pi_m_r = 0.9;
    double p0 = 0.05;
    LayerWeighting weighting = LayerWeighting::mean_gr;

    KernelParams kernel_g() const { return {pi_p_g, pi_m_g, p0}; }
    KernelParams kernel_r() const { return {pi_p_r, pi_m_r, p0}; }

    /** Opinion-level acceptance probability fed into the mimicking edge rule. */
    double p_of(Opinion x) const {
        const double g = (x == Opinion::Plus) ? pi_p_g : pi_m_g;
        const double r = (x == Opinion::Plus) ? pi_p_r : pi_m_r;
        switch (weighting) {
            case LayerWeighting::green_only: return g;
            case LayerWeighting::red_only: return r;
            default: return 0.5 * (g + r);
        }
    }

    void validate() const {
        require(beta > 0.0, "beta must be positive");
        require(q >= 1, "q must be a positive integer");
        kernel_g().validate();
        kernel_r().validate();
    }
};

using ModelParams = std::variant<Model1Params, Model2Params, Model3Params>;

inline void validate(const ModelParams& p) {
    std::visit([](const auto& m) { m.validate(); }, p);
}

} // namespace covoter

#endif
