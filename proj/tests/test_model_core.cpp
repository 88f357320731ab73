#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "covoter/density.hpp"
#include "covoter/kernels.hpp"
#include "covoter/params.hpp"
#include "covoter/rng.hpp"
#include "covoter/vertex.hpp"

using namespace covoter;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear ramp densities with Plus mass 0.6: f_+(y) = 1.2 y, f_-(y) = 0.8 (1-y).
DensityField ramp_field(int M, double t = 0.0) {
    DensityField f(t, M);
    for (int i = 0; i <= M; ++i) {
        const double y = f.node(i);
        f.f_plus[i] = 1.2 * y;
        f.f_minus[i] = 0.8 * (1.0 - y);
    }
    return f;
}

}  // namespace

TEST_CASE("advance_y closed form and flow property") {
    // Plus pulls y toward 1, Minus decays it toward 0
    CHECK(advance_y(0.0, Opinion::Plus, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(advance_y(1.0, Opinion::Minus, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(advance_y(0.3, Opinion::Plus, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(advance_y(1.0, Opinion::Plus, 7.5) == 1.0);
    CHECK(advance_y(0.0, Opinion::Minus, 7.5) == 0.0);

    // two short windows compose to one long window
    for (Opinion op : {Opinion::Plus, Opinion::Minus}) {
        const double one = advance_y(0.37, op, 0.9);
        const double two = advance_y(advance_y(0.37, op, 0.4), op, 0.5);
        CHECK(two == doctest::Approx(one).epsilon(1e-14));
    }

    // stays in [0,1] even from the boundary over long horizons
    CHECK(advance_y(1.0, Opinion::Plus, 50.0) <= 1.0);
    CHECK(advance_y(0.0, Opinion::Minus, 50.0) >= 0.0);

    CHECK_THROWS_AS(advance_y(0.5, Opinion::Plus, -0.1), contract_error);
    CHECK_THROWS_AS(advance_y(1.5, Opinion::Plus, 0.1), contract_error);
}

TEST_CASE("vertex_type removes the initial remnant and clamps to its range") {
    // fresh vertex: no exposure yet
    CHECK(vertex_type(0.7, 0.7, 0.0) == 0.0);
    // full exposure: y grown from y0 under constant Plus
    const double t = 1.3, y0 = 0.25;
    const double y = advance_y(y0, Opinion::Plus, t);
    CHECK(vertex_type(y, y0, t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-14));
    // constant Minus gives type 0 exactly
    CHECK(vertex_type(advance_y(y0, Opinion::Minus, t), y0, t) == 0.0);
    CHECK_THROWS_AS(vertex_type(0.5, 0.5, -1.0), contract_error);
}

TEST_CASE("kernel_h: intercept/slope form, limits, symmetry, monotonicity") {
    const KernelParams k{0.9, 0.1, 0.05};

    // t=0: only the initial coin remains
    CHECK(kernel_h(k, 0.0, 0.0, 0.0) == doctest::Approx(0.05).epsilon(1e-15));
    // t=inf extremes hit the agreeing-pair probabilities
    CHECK(kernel_h(k, kInf, 1.0, 1.0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(kernel_h(k, kInf, 0.0, 0.0) == doctest::Approx(0.1).epsilon(1e-15));

    for (double t : {0.0, 0.4, 2.0, 50.0}) {
        const double c = kernel_h_intercept(k, t);
        const double s = kernel_h_slope(k);
        for (double u : {0.0, 0.3, 1.0})
            for (double v : {0.1, 0.8}) {
                CHECK(kernel_h(k, t, u, v) == kernel_h(k, t, v, u));
                CHECK(kernel_h(k, t, u, v) ==
                      doctest::Approx(std::clamp(c + s * (u + v), 0.0, 1.0)).epsilon(1e-15));
            }
        // increasing in each argument when pi_p > pi_m
        CHECK(kernel_h(k, t, 0.9, 0.5) >= kernel_h(k, t, 0.2, 0.5));
    }

    // clamping: extreme parameters push the affine form past 1
    const KernelParams wide{1.0, 0.0, 1.0};
    CHECK(kernel_h(wide, 0.1, 0.9, 0.9) == 1.0);

    CHECK_THROWS_AS(kernel_h(k, -0.5, 0.2, 0.2), contract_error);
    CHECK_THROWS_AS(kernel_h(k, 1.0, 1.2, 0.2), contract_error);
    CHECK_THROWS_AS(kernel_h(KernelParams{1.4, 0.1, 0.05}, 1.0, 0.2, 0.2), contract_error);
}

TEST_CASE("kernel_hr: overlay extremes and the q=1 reduction") {
    // fully separating colours: green favours Plus, red favours Minus
    Model3Params p;
    p.pi_p_g = 1.0;
    p.pi_m_g = 0.0;
    p.pi_p_r = 0.0;
    p.pi_m_r = 1.0;

    for (int q : {1, 2, 3}) {
        p.q = q;
        // both endpoints extreme same-side types: exactly one colour survives
        CHECK(kernel_hr(p, kInf, 1.0, 1.0) == 1.0);
        CHECK(kernel_hr(p, kInf, 0.0, 0.0) == 1.0);
        // opposite extremes: both colours half-active
        CHECK(kernel_hr(p, kInf, 1.0, 0.0) ==
              doctest::Approx(2.0 * std::pow(4.0, -q)).epsilon(1e-15));
    }
    p.q = 3;
    CHECK(kernel_hr(p, kInf, 1.0, 0.0) == doctest::Approx(0.03125).epsilon(1e-15));

    // q=1 reduces to Hg(1-Hr) + Hr(1-Hg)
    Model3Params d;  // defaults, q=1
    for (double t : {0.3, 1.7})
        for (double u : {0.0, 0.4, 0.95})
            for (double v : {0.2, 0.7}) {
                const double hg = kernel_h(d.kernel_g(), t, u, v);
                const double hr = kernel_h(d.kernel_r(), t, u, v);
                CHECK(kernel_hr(d, t, u, v) ==
                      doctest::Approx(hg * (1.0 - hr) + hr * (1.0 - hg)).epsilon(1e-14));
            }

    // identical colours at q=1: two exchangeable layers give 2H(1-H)
    Model3Params same;
    same.pi_p_r = same.pi_p_g;
    same.pi_m_r = same.pi_m_g;
    for (double u : {0.1, 0.6}) {
        const double h = kernel_h(same.kernel_g(), 0.9, u, 0.3);
        CHECK(kernel_hr(same, 0.9, u, 0.3) ==
              doctest::Approx(2.0 * h * (1.0 - h)).epsilon(1e-14));
    }
}

TEST_CASE("alpha: exact special cases") {
    const KernelParams k{0.9, 0.1, 0.05};

    // equal branches: numerator is exactly half the denominator
    DensityField half(0.4, 64);
    for (int i = 0; i <= 64; ++i) half.f_plus[i] = half.f_minus[i] = 0.5;
    for (double u : {0.0, 0.37, 1.0}) CHECK(alpha(k, half, u) == 0.5);

    // no Minus mass at all: alpha is 1 whatever the kernel
    DensityField pure(1.1, 32);
    for (int i = 0; i <= 32; ++i) pure.f_plus[i] = 1.0;
    CHECK(alpha(k, pure, 0.3) == 1.0);

    // flat kernel (pi_p == pi_m): alpha equals the Plus mass fraction
    const KernelParams flat{0.6, 0.6, 0.2};
    const DensityField ramp = ramp_field(128, 0.7);
    CHECK(alpha(flat, ramp, 0.9) == doctest::Approx(0.6).epsilon(1e-13));

    // zero field: the weighted mass vanishes
    DensityField zero(0.0, 16);
    CHECK_THROWS_AS(alpha(k, zero, 0.5), singular_parameter_error);

    CHECK_THROWS_AS(alpha(k, ramp, -0.1), contract_error);
}

TEST_CASE("alpha: frozen quadrature values on the linear ramp") {
    // t large enough that e^{-t} underflows to zero: H = 0.1 + 0.4 (y + u),
    // f_+ = 1.2 y, f_- = 0.8 (1 - y), u = 1/4. Exact ratio is 21/31.
    const KernelParams k{0.9, 0.1, 0.05};
    const double exact = 21.0 / 31.0;
    const double t = 1e9;

    CHECK(alpha(k, ramp_field(256, t), 0.25) == doctest::Approx(0.677421641273).epsilon(1e-9));
    CHECK(alpha(k, ramp_field(1024, t), 0.25) == doctest::Approx(0.677419497741).epsilon(1e-9));
    CHECK(alpha(k, ramp_field(4096, t), 0.25) == doctest::Approx(0.677419363770).epsilon(1e-9));
    CHECK(alpha(k, ramp_field(4096, t), 0.25) == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("alpha_profile matches the node-by-node evaluation bitwise") {
    const DensityField f = ramp_field(200, 0.8);

    const KernelParams k{0.9, 0.1, 0.05};
    const std::vector<double> prof = alpha_profile(k, f);
    REQUIRE(prof.size() == 201);
    for (int i = 0; i <= 200; i += 7) CHECK(prof[i] == alpha(k, f, f.node(i)));

    Model3Params m3;
    m3.q = 2;
    const std::vector<double> tprof = alpha_tilde_profile(m3, f);
    for (int i = 0; i <= 200; i += 7) CHECK(tprof[i] == alpha_tilde(m3, f, f.node(i)));
}

TEST_CASE("quantile: uniform field and generalized-inverse round trip") {
    DensityField half(0.0, 8);
    for (int i = 0; i <= 8; ++i) half.f_plus[i] = half.f_minus[i] = 0.5;

    // combined CDF of the uniform field crosses mass m at u = 2m on the Plus
    // branch, then again at u = 2(m - 1/2) on the Minus branch
    CHECK(quantile(half, 0.0) == 0.0);
    CHECK(quantile(half, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(quantile(half, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(quantile(half, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(quantile(half, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    // CDF(quantile(m)) == m wherever the density is positive; the CDF here is
    // the piecewise-linear interpolant of the node trapezoid cumsums, which
    // is exactly what quantile inverts
    const DensityField f = ramp_field(128);
    const double mp = f.mass_plus();
    const RngStream rng(99);
    RngSequence seq(rng, RngKind::sample, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double m = seq.u01();
        const double u = quantile(f, m);
        const auto branch_cdf = [&](const std::vector<double>& fv, double x) {
            double cum = 0.0;
            for (int i = 1; i <= f.M; ++i) {
                const double l = f.node(i - 1), r = f.node(i);
                if (x <= l) break;
                const double cell = 0.5 * f.h() * (fv[i - 1] + fv[i]);
                cum += (x >= r) ? cell : cell * (x - l) / f.h();
                if (x < r) break;
            }
            return cum;
        };
        const double cdf =
            m <= mp ? branch_cdf(f.f_plus, u) : mp + branch_cdf(f.f_minus, u);
        CHECK(std::abs(cdf - m) < 1e-12);
    }

    CHECK_THROWS_AS(quantile(f, -0.01), contract_error);
    CHECK_THROWS_AS(quantile(f, 1.01), contract_error);
}

TEST_CASE("density trajectory: interpolation and coverage") {
    DensityField a(0.0, 4), b(1.0, 4), c(3.0, 4);
    for (int i = 0; i <= 4; ++i) {
        a.f_plus[i] = 1.0;
        b.f_plus[i] = 0.5;
        b.f_minus[i] = 0.5;
        c.f_minus[i] = 1.0;
    }
    const DensityTrajectory traj({a, b, c});

    CHECK(traj.covers(0.0, 3.0));
    CHECK_FALSE(traj.covers(0.0, 3.5));

    // stored times are returned exactly
    CHECK(traj.at(1.0).f_plus[2] == 0.5);
    // halfway between slices 0 and 1
    CHECK(traj.at(0.5).f_plus[2] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(traj.at(0.5).t == 0.5);
    // interpolation weight uses the slice spacing, not the index
    CHECK(traj.at(2.0).f_plus[2] == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(traj.at(3.5), contract_error);
    CHECK_THROWS_AS(DensityTrajectory({b, a}), contract_error);
    CHECK_THROWS_AS(DensityTrajectory(std::vector<DensityField>{}), contract_error);
}

TEST_CASE("density field: masses, weights, validation") {
    DensityField f(0.0, 4);
    for (int i = 0; i <= 4; ++i) f.f_plus[i] = 1.0;
    CHECK(f.mass_plus() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.mass_minus() == 0.0);
    CHECK(f.weight(0) == doctest::Approx(0.125));
    CHECK(f.weight(2) == doctest::Approx(0.25));
    f.validate();

    f.f_plus[2] = -0.5;
    CHECK_THROWS_AS(f.validate(), contract_error);
    f.f_plus[2] = 1.0;
    f.f_minus[2] = 3.0;  // pushes total mass far from 1
    CHECK_THROWS_AS(f.validate(), contract_error);
    CHECK_THROWS_AS(DensityField(0.0, 1), contract_error);
}
