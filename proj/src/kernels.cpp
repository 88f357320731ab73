#include "covoter/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace covoter {

namespace {

double ipow(double x, int q) {
    double r = 1.0;
    for (int k = 0; k < q; ++k) r *= x;
    return r;
}

}  // namespace

double kernel_h_intercept(const KernelParams& k, double t) {
    k.validate();
    require(t >= 0.0, "kernel time must be >= 0");
    const double em = std::exp(-t);  // exp(-inf) == 0, so t = infinity is fine
    return em * k.p0 + k.pi_m * (1.0 - em);
}

double kernel_h_slope(const KernelParams& k) {
    k.validate();
    return 0.5 * (k.pi_p - k.pi_m);
}

double kernel_h(const KernelParams& k, double t, double u, double v) {
    require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0,
            "kernel arguments must lie in [0,1]");
    const double val = kernel_h_intercept(k, t) + kernel_h_slope(k) * (u + v);
    return std::clamp(val, 0.0, 1.0);
}

double kernel_hr(const Model3Params& p, double t, double u, double v) {
    p.validate();
    const double hg = kernel_h(p.kernel_g(), t, u, v);
    const double hr = kernel_h(p.kernel_r(), t, u, v);
    const double val = ipow(hg, p.q) * ipow(1.0 - hr, p.q) + ipow(hr, p.q) * ipow(1.0 - hg, p.q);
    return std::clamp(val, 0.0, 1.0);
}

namespace {

template <typename Kernel>
double alpha_impl(const DensityField& field, double u, Kernel&& h) {
    require(u >= 0.0 && u <= 1.0, "alpha type argument must lie in [0,1]");
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= field.M; ++i) {
        const double w = field.weight(i) * h(field.node(i), u);
        num += w * field.f_plus[i];
        den += w * (field.f_plus[i] + field.f_minus[i]);
    }
    if (den < 1e-12)
        throw singular_parameter_error(
            "alpha undefined: kernel-weighted density mass is numerically zero");
    return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

double alpha(const KernelParams& k, const DensityField& field, double u) {
    return alpha_impl(field, u,
                      [&](double y, double x) { return kernel_h(k, field.t, y, x); });
}

double alpha_tilde(const Model3Params& p, const DensityField& field, double u) {
    return alpha_impl(field, u,
                      [&](double y, double x) { return kernel_hr(p, field.t, y, x); });
}

namespace {

template <typename Kernel>
std::vector<double> profile_impl(const DensityField& field, Kernel&& h) {
    std::vector<double> out(field.M + 1);
    for (int j = 0; j <= field.M; ++j)
        out[j] = alpha_impl(field, field.node(j), h);
    return out;
}

}  // namespace

std::vector<double> alpha_profile(const KernelParams& k, const DensityField& field) {
    const double c = kernel_h_intercept(k, field.t);
    const double s = kernel_h_slope(k);
    return profile_impl(field, [c, s](double y, double x) {
        return std::clamp(c + s * (y + x), 0.0, 1.0);
    });
}

std::vector<double> alpha_tilde_profile(const Model3Params& p, const DensityField& field) {
    p.validate();
    const double cg = kernel_h_intercept(p.kernel_g(), field.t);
    const double sg = kernel_h_slope(p.kernel_g());
    const double cr = kernel_h_intercept(p.kernel_r(), field.t);
    const double sr = kernel_h_slope(p.kernel_r());
    const int q = p.q;
    return profile_impl(field, [=](double y, double x) {
        const double hg = std::clamp(cg + sg * (y + x), 0.0, 1.0);
        const double hr = std::clamp(cr + sr * (y + x), 0.0, 1.0);
        const double val =
            ipow(hg, q) * ipow(1.0 - hr, q) + ipow(hr, q) * ipow(1.0 - hg, q);
        return std::clamp(val, 0.0, 1.0);
    });
}

}  // namespace covoter
