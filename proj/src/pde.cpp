#include "covoter/pde.hpp"

#include <algorithm>
#include <cmath>

#include "covoter/kernels.hpp"

namespace covoter {

double Matrix2::max_abs_diff(const Matrix2& o) const {
    return std::max({std::abs(a11 - o.a11), std::abs(a12 - o.a12),
                     std::abs(a21 - o.a21), std::abs(a22 - o.a22)});
}

Matrix2 rate_matrix(const Model1Params& p) {
    p.validate();
    return {1.0 - p.gamma_pm, p.gamma_mp, p.gamma_pm, 1.0 - p.gamma_mp};
}

Matrix2 expm_n(double t, const Model1Params& p) {
    p.validate();
    require(std::isfinite(t), "matrix exponential time must be finite");
    const double g = p.gamma_pm + p.gamma_mp;
    const double et = std::exp(t);
    const double eg = std::exp(-g * t);
    const double c = et / g;
    return {c * (p.gamma_pm * eg + p.gamma_mp), c * (p.gamma_mp * (1.0 - eg)),
            c * (p.gamma_pm * (1.0 - eg)), c * (p.gamma_mp * eg + p.gamma_pm)};
}

Matrix2 expm_taylor(const Matrix2& a, double t, int terms) {
    require(std::isfinite(t), "matrix exponential time must be finite");
    require(terms >= 2, "Taylor reference needs at least 2 terms");
    Matrix2 at = a.scaled(t);
    // scale so the infinity norm is at most 1/2, sum the series, square back
    double norm = std::max(std::abs(at.a11) + std::abs(at.a12),
                           std::abs(at.a21) + std::abs(at.a22));
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const Matrix2 b = at.scaled(std::ldexp(1.0, -squarings));
    Matrix2 sum = Matrix2::identity();
    Matrix2 term = Matrix2::identity();
    for (int k = 1; k < terms; ++k) {
        term = (term * b).scaled(1.0 / k);
        sum = sum + term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

double relaxation_p_plus(double t, double p0_plus, const Model1Params& p) {
    p.validate();
    require(t >= 0.0, "relaxation time must be >= 0");
    require(p0_plus >= 0.0 && p0_plus <= 1.0, "initial Plus mass must lie in [0,1]");
    const double g = p.gamma_pm + p.gamma_mp;
    const double pi_star = p.gamma_mp / g;
    return pi_star + (p0_plus - pi_star) * std::exp(-g * t);
}

void PdeConfig::validate() const {
    require_config(M >= 2, "pde config: M must be at least 2");
    require_config(std::isfinite(dt) && dt > 0.0, "pde config: dt must be positive");
    require_config(std::isfinite(T) && T >= 0.0, "pde config: T must be >= 0");
    require_config(store_every >= 1, "pde config: store_every must be >= 1");
    require_config(dt <= 1.0 / M + 1e-15,
                   "pde config: dt must satisfy the transport bound dt <= 1/M");
}

DensityField stationary_beta(double a, double b, int M) {
    require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0,
            "Beta shape parameters must be positive");
    DensityField f(0.0, M);
    const double log_b = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double inv_beta = std::exp(-log_b);
    for (int i = 0; i <= M; ++i) {
        const double u = f.node(i);
        f.f_plus[i] = std::pow(u, a) * std::pow(1.0 - u, b - 1.0) * inv_beta;
        f.f_minus[i] = std::pow(u, a - 1.0) * std::pow(1.0 - u, b) * inv_beta;
    }
    // shape < 1 makes the density blow up at an endpoint; clip those nodes
    // to the neighbouring value so the grid stays finite
    if (!std::isfinite(f.f_minus[0])) f.f_minus[0] = f.f_minus[1];
    if (!std::isfinite(f.f_plus[M])) f.f_plus[M] = f.f_plus[M - 1];
    const double tot = f.total_mass();
    require(std::isfinite(tot) && tot > 0.0, "stationary density has zero mass on this grid");
    for (int i = 0; i <= M; ++i) {
        f.f_plus[i] /= tot;
        f.f_minus[i] /= tot;
    }
    return f;
}

DensityField stationary_model1(const Model1Params& p, int M) {
    p.validate();
    return stationary_beta(p.gamma_mp, p.gamma_pm, M);
}

DensityField stationary_model2(double beta, double p_plus, int M) {
    require(std::isfinite(beta) && beta > 0.0, "beta must be positive");
    require(p_plus > 0.0 && p_plus < 1.0, "p_plus must lie strictly inside (0,1)");
    return stationary_beta(beta * p_plus, beta * (1.0 - p_plus), M);
}

std::vector<SeriesTerm> series_coefficients(const Model1Params& p, double f_plus_0,
                                            int K, double exponent_offset) {
    p.validate();
    require(std::isfinite(f_plus_0), "leading series coefficient must be finite");
    require(K >= 0, "series order must be >= 0");
    require(std::isfinite(exponent_offset) && exponent_offset >= 0.0,
            "exponent offset must be >= 0");
    std::vector<SeriesTerm> out;
    out.reserve(static_cast<std::size_t>(K) + 1);
    double c = f_plus_0;
    for (int k = 0; k <= K; ++k) {
        const double rho = exponent_offset + k;
        const double den = p.gamma_mp - 1.0 - rho;
        if (std::abs(den) < 1e-12)
            throw singular_parameter_error(
                "stationary series pole: gamma_mp - 1 equals an exponent of the grid");
        out.push_back({c, p.gamma_pm * c / den});
        if (k < K) {
            const double ratio =
                (rho - p.gamma_pm + 1.0 + p.gamma_mp * p.gamma_pm / den) / (rho + 1.0);
            c *= ratio;
        }
    }
    return out;
}

namespace {

/** d/dt of both branches: first-order upwind transport plus reaction.
 *  Plus branch moves right with speed 1-u, Minus branch moves left with
 *  speed u; interface fluxes take the upwind cell value and the domain
 *  boundaries admit no inflow, so summed over cells the transport part
 *  telescopes to zero and mass changes only through the reaction. */
void transport_rhs(const DensityField& f, const std::vector<double>& rp,
                   const std::vector<double>& rm, std::vector<double>& dp,
                   std::vector<double>& dm) {
    const int m = f.M;
    const double h = f.h();
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = (i + 0.5) * h;
        const double flux = (1.0 - x) * f.f_plus[i];
        dp[i] = (prev - flux) / f.weight(i) + rp[i];
        prev = flux;
    }
    dp[m] = prev / f.weight(m) + rp[m];

    double next = 0.0;
    for (int i = m - 1; i >= 0; --i) {
        const double x = (i + 0.5) * h;
        const double flux = -x * f.f_minus[i + 1];
        dm[i + 1] = (flux - next) / f.weight(i + 1) + rm[i + 1];
        next = flux;
    }
    dm[0] = -next / f.weight(0) + rm[0];
}

template <typename ReactionFn>
DensityTrajectory advance(const DensityField& init, const PdeConfig& cfg,
                          double rate_bound, ReactionFn&& reaction) {
    cfg.validate();
    require_config(init.M == cfg.M, "initial density grid must match the pde config");
    require_config(std::abs(init.t) < 1e-12, "initial density must be a t=0 slice");
    init.validate();

    const int m = cfg.M;
    const double h = 1.0 / m;
    std::vector<double> rp(m + 1), rm(m + 1), k1p(m + 1), k1m(m + 1), k2p(m + 1), k2m(m + 1);
    DensityField cur = init;
    cur.t = 0.0;

    std::vector<DensityField> slices;
    slices.push_back(cur);
    if (cfg.T <= 0.0) return DensityTrajectory(std::move(slices));

    const int n_outer = static_cast<int>(std::ceil(cfg.T / cfg.dt - 1e-9));
    for (int k = 1; k <= n_outer; ++k) {
        const double t_to = std::min(k * cfg.dt, cfg.T);
        const double span = t_to - cur.t;
        int n_sub = std::max<int>(1, static_cast<int>(std::ceil(span / (0.5 * h) - 1e-12)));
        if (rate_bound > 0.0)
            n_sub = std::max<int>(
                n_sub, static_cast<int>(std::ceil(span * rate_bound / 0.5 - 1e-12)));
        const double dt = span / n_sub;
        for (int j = 0; j < n_sub; ++j) {
            reaction(cur, rp, rm);
            transport_rhs(cur, rp, rm, k1p, k1m);
            DensityField stage = cur;
            stage.t = cur.t + dt;
            for (int i = 0; i <= m; ++i) {
                stage.f_plus[i] = cur.f_plus[i] + dt * k1p[i];
                stage.f_minus[i] = cur.f_minus[i] + dt * k1m[i];
            }
            reaction(stage, rp, rm);
            transport_rhs(stage, rp, rm, k2p, k2m);
            for (int i = 0; i <= m; ++i) {
                cur.f_plus[i] += 0.5 * dt * (k1p[i] + k2p[i]);
                cur.f_minus[i] += 0.5 * dt * (k1m[i] + k2m[i]);
            }
            cur.t = (j + 1 == n_sub) ? t_to : cur.t + dt;
        }
        if (k % cfg.store_every == 0 || k == n_outer) slices.push_back(cur);
    }
    return DensityTrajectory(std::move(slices));
}

}  // namespace

DensityTrajectory solve_model1(const DensityField& init, const Model1Params& p,
                               const PdeConfig& cfg) {
    p.validate();
    const double bound = std::max(p.gamma_pm, p.gamma_mp);
    return advance(init, cfg, bound,
                   [&p](const DensityField& f, std::vector<double>& rp, std::vector<double>& rm) {
                       for (int i = 0; i <= f.M; ++i) {
                           rp[i] = -p.gamma_pm * f.f_plus[i] + p.gamma_mp * f.f_minus[i];
                           rm[i] = -rp[i];
                       }
                   });
}

DensityTrajectory solve_model2(const DensityField& init, const Model2Params& p,
                               const PdeConfig& cfg) {
    p.validate();
    const KernelParams k = p.kernel();
    return advance(init, cfg, p.beta,
                   [&p, k](const DensityField& f, std::vector<double>& rp, std::vector<double>& rm) {
                       const std::vector<double> a = alpha_profile(k, f);
                       for (int i = 0; i <= f.M; ++i) {
                           rp[i] = p.beta * (a[i] * f.f_minus[i] - (1.0 - a[i]) * f.f_plus[i]);
                           rm[i] = -rp[i];
                       }
                   });
}

DensityTrajectory solve_model3(const DensityField& init, const Model3Params& p,
                               const PdeConfig& cfg) {
    p.validate();
    return advance(init, cfg, p.beta,
                   [&p](const DensityField& f, std::vector<double>& rp, std::vector<double>& rm) {
                       const std::vector<double> a = alpha_tilde_profile(p, f);
                       for (int i = 0; i <= f.M; ++i) {
                           rp[i] = p.beta * (a[i] * f.f_minus[i] - (1.0 - a[i]) * f.f_plus[i]);
                           rm[i] = -rp[i];
                       }
                   });
}

}  // namespace covoter
