#include "covoter/density.hpp"

#include <algorithm>
#include <cmath>

namespace covoter {

DensityField::DensityField(double time, int cells)
    : t(time), M(cells), f_plus(cells + 1, 0.0), f_minus(cells + 1, 0.0) {
    require(cells >= 2, "density grid needs at least 2 cells");
    require(std::isfinite(time) && time >= 0.0, "density time must be finite and >= 0");
}

double DensityField::mass(const std::vector<double>& f) const {
    double s = 0.0;
    for (int i = 0; i <= M; ++i) s += weight(i) * f[i];
    return s;
}

void DensityField::validate(double mass_tol) const {
    require(static_cast<int>(f_plus.size()) == M + 1 && static_cast<int>(f_minus.size()) == M + 1,
            "density field arrays must have M+1 nodes");
    for (int i = 0; i <= M; ++i) {
        require(std::isfinite(f_plus[i]) && std::isfinite(f_minus[i]),
                "density field values must be finite");
        require(f_plus[i] >= -1e-9 && f_minus[i] >= -1e-9,
                "density field values must be non-negative");
    }
    const double m = total_mass();
    require(std::abs(m - 1.0) <= mass_tol, "density field total mass must be 1");
}

DensityTrajectory::DensityTrajectory(std::vector<DensityField> slices)
    : slices_(std::move(slices)) {
    require(!slices_.empty(), "trajectory needs at least one slice");
    const int m = slices_.front().M;
    for (std::size_t k = 0; k < slices_.size(); ++k) {
        require(slices_[k].M == m, "trajectory slices must share one grid");
        if (k > 0)
            require(slices_[k].t > slices_[k - 1].t, "trajectory times must be strictly increasing");
    }
}

bool DensityTrajectory::covers(double t0, double t1) const {
    const double tol = 1e-9;
    return slices_.front().t <= t0 + tol && t1 <= slices_.back().t + tol;
}

DensityField DensityTrajectory::at(double t) const {
    const double tol = 1e-9;
    require(covers(t, t), "requested time outside stored trajectory");
    const double lo = slices_.front().t, hi = slices_.back().t;
    const double tc = std::clamp(t, lo, hi);
    // first slice with time >= tc
    std::size_t j = 0;
    while (j + 1 < slices_.size() && slices_[j].t < tc - tol) ++j;
    if (std::abs(slices_[j].t - tc) <= tol) {
        DensityField out = slices_[j];
        out.t = t;
        return out;
    }
    // strictly between slices j-1 and j
    const DensityField& a = slices_[j - 1];
    const DensityField& b = slices_[j];
    const double w = (tc - a.t) / (b.t - a.t);
    DensityField out(t, a.M);
    for (int i = 0; i <= a.M; ++i) {
        out.f_plus[i] = (1.0 - w) * a.f_plus[i] + w * b.f_plus[i];
        out.f_minus[i] = (1.0 - w) * a.f_minus[i] + w * b.f_minus[i];
    }
    return out;
}

namespace {

// Inverts the piecewise-linear node CDF of one branch. `target` is a mass in
// [0, branch mass]; returns the u-coordinate where the cumulative trapezoid
// integral of `f` reaches it.
double invert_branch(const DensityField& field, const std::vector<double>& f, double target) {
    const int m = field.M;
    if (target <= 0.0) return 0.0;
    double cum = 0.0;
    for (int i = 1; i <= m; ++i) {
        const double cell = 0.5 * field.h() * (f[i - 1] + f[i]);
        if (cum + cell >= target) {
            if (cell <= 0.0) return field.node(i - 1);
            const double frac = (target - cum) / cell;
            return field.node(i - 1) + frac * field.h();
        }
        cum += cell;
    }
    return 1.0;
}

}  // namespace

double quantile(const DensityField& field, double y) {
    require(y >= 0.0 && y <= 1.0, "quantile argument must lie in [0,1]");
    const double mp = field.mass_plus();
    if (y <= mp) return invert_branch(field, field.f_plus, y);
    return invert_branch(field, field.f_minus, y - mp);
}

}  // namespace covoter
