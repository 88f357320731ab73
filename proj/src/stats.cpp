#include "covoter/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "covoter/edge_set.hpp"

namespace covoter {

Histogram type_histogram(const Snapshot& snap, int bins, Observable obs) {
    require(bins >= 1, "histogram needs at least one bin");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / bins;
    h.counts.assign(bins, 0);
    const std::vector<double>& vals = obs == Observable::y ? snap.y : snap.types;
    for (double v : vals) {
        require(v >= 0.0 && v <= 1.0, "observable outside [0,1]");
        const int b = std::min(bins - 1, static_cast<int>(v * bins));
        ++h.counts[b];
        ++h.total;
    }
    return h;
}

double beta_l1(const Histogram& h, double a, double b) {
    require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0,
            "Beta shape parameters must be positive");
    require(h.bins() >= 1, "histogram is empty");
    double dist = 0.0;
    double cdf_left = 0.0;
    for (int k = 0; k < h.bins(); ++k) {
        const double cdf_right =
            k + 1 == h.bins() ? 1.0 : boost::math::ibeta(a, b, h.edges[k + 1]);
        dist += std::abs(h.mass(k) - (cdf_right - cdf_left));
        cdf_left = cdf_right;
    }
    return dist;
}

std::optional<double> consensus_time(const FractionTrajectory& traj, double eps) {
    require(eps >= 0.0 && eps < 0.5, "consensus threshold must lie in [0, 0.5)");
    require(traj.t.size() == traj.frac_plus.size(), "trajectory arrays must align");
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const double f = traj.frac_plus[k];
        if (f <= eps || f >= 1.0 - eps) return traj.t[k];
    }
    return std::nullopt;
}

Polarisation polarisation(const Snapshot& snap) {
    require(snap.graph.has_value(), "snapshot carries no graph");
    const int n = snap.n();
    long long disagree = 0;
    const long long active = snap.graph->active_count();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (snap.opinions[i] != snap.opinions[j] && snap.graph->active(i, j)) ++disagree;
    Polarisation p;
    p.disagree_density = static_cast<double>(disagree) / EdgeSet::pair_count(n);
    p.disagree_share = active > 0 ? static_cast<double>(disagree) / active : 0.0;
    return p;
}

}  // namespace covoter
